#include "segedit/backends/remote.hpp"
#include "segedit/backends/wire.hpp"

#include <httplib.h>

#include <regex>

namespace segedit {

using nlohmann::json;

std::string_view to_string(BackendError::Kind kind) {
    switch (kind) {
    case BackendError::Kind::connection: return "connection error";
    case BackendError::Kind::timeout: return "timeout";
    case BackendError::Kind::protocol_violation: return "protocol violation";
    }
    return "error";
}

BackendError::BackendError(Kind kind, Role role, std::string endpoint, std::string const& detail)
    : Error(std::string(to_string(role)) + " backend at " + endpoint + ": " + std::string(segedit::to_string(kind)) +
            ": " + detail),
      kind_(kind), role_(role), endpoint_(std::move(endpoint)) {}

namespace {

struct ParsedUrl {
    std::string origin; // scheme://host[:port]
    std::string base_path;
};

ParsedUrl parse_url(std::string const& url, Role role) {
    static std::regex const re(R"(^(http://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw BackendError(BackendError::Kind::connection, role, url, "unsupported endpoint URL (expected http://)");
    }
    std::string base = m[2].str();
    while (!base.empty() && base.back() == '/') {
        base.pop_back();
    }
    return {m[1].str(), base};
}

// One request on a fresh connection. The connection is owned by this call
// alone, so an abandoned call leaves no shared state behind.
json call(RemoteEndpoint const& endpoint, Role role, std::string const& path, json const* body) {
    auto url = parse_url(endpoint.url, role);
    httplib::Client client(url.origin);
    auto const timeout = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    auto const started = std::chrono::steady_clock::now();
    auto const full_path = url.base_path + path;
    auto res = body ? client.Post(full_path, body->dump(), "application/json") : client.Get(full_path);
    if (!res) {
        auto err = res.error();
        auto elapsed = std::chrono::steady_clock::now() - started;
        bool timed_out = err == httplib::Error::ConnectionTimeout ||
                         ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                          elapsed >= timeout * 0.95);
        throw BackendError(timed_out ? BackendError::Kind::timeout : BackendError::Kind::connection, role,
                           endpoint.url, path + ": " + httplib::to_string(err));
    }
    if (res->status != 200) {
        std::string detail = res->body.size() > 200 ? res->body.substr(0, 200) + "..." : res->body;
        throw BackendError(BackendError::Kind::protocol_violation, role, endpoint.url,
                           path + " returned HTTP " + std::to_string(res->status) + ": " + detail);
    }
    try {
        return json::parse(res->body);
    } catch (json::exception const& e) {
        throw BackendError(BackendError::Kind::protocol_violation, role, endpoint.url,
                           path + " returned invalid JSON: " + e.what());
    }
}

json probe(RemoteEndpoint const& endpoint, Role role) {
    json body = call(endpoint, role, "/health", nullptr);
    std::string reported = body.is_object() ? body.value("role", std::string()) : std::string();
    if (reported != to_string(role)) {
        throw BackendError(BackendError::Kind::protocol_violation, role, endpoint.url,
                           "health probe reports role '" + reported + "'");
    }
    return body;
}

template <typename Fn>
auto validated(RemoteEndpoint const& endpoint, Role role, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (ContractViolation const& e) {
        throw BackendError(BackendError::Kind::protocol_violation, role, endpoint.url, e.what());
    }
}

} // namespace

RemoteSegmenter::RemoteSegmenter(RemoteEndpoint endpoint, json params)
    : endpoint_(std::move(endpoint)), params_(params.is_object() ? std::move(params) : json::object()) {
    auto body = probe(endpoint_, Role::segmenter);
    info_ = validated(endpoint_, Role::segmenter, [&] { return wire::parse_segmenter_info(body); });
}

std::vector<Segment> RemoteSegmenter::segment(ImageBuffer const& image, json const& params) const {
    json merged = params_;
    if (params.is_object()) {
        merged.update(params);
    }
    json request = wire::segment_request(image, merged);
    json body = call(endpoint_, Role::segmenter, "/segment", &request);
    return validated(endpoint_, Role::segmenter, [&] {
        auto segments = wire::parse_segments(body);
        check_segments(segments, image.width(), image.height(), info_.supports_overlapping_masks);
        return segments;
    });
}

RemoteScorer::RemoteScorer(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    auto body = probe(endpoint_, Role::scorer);
    info_ = validated(endpoint_, Role::scorer, [&] { return wire::parse_scorer_info(body); });
}

std::vector<double> RemoteScorer::score(std::span<ImageBuffer const> crops, std::string_view prompt) const {
    json request = wire::score_request(crops, prompt);
    json body = call(endpoint_, Role::scorer, "/score", &request);
    return validated(endpoint_, Role::scorer, [&] {
        auto scores = wire::parse_scores(body);
        check_scores(scores, crops.size(), info_.score_range);
        return scores;
    });
}

RemoteInpainter::RemoteInpainter(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    auto body = probe(endpoint_, Role::inpainter);
    info_ = validated(endpoint_, Role::inpainter, [&] { return wire::parse_inpainter_info(body); });
}

ImageBuffer RemoteInpainter::inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                                     int64_t seed) const {
    json request = wire::inpaint_request(image, mask, prompt, seed);
    json body = call(endpoint_, Role::inpainter, "/inpaint", &request);
    return validated(endpoint_, Role::inpainter, [&] {
        auto out = wire::parse_inpaint_image(body);
        check_inpaint_result(image, out);
        return out;
    });
}

} // namespace segedit
