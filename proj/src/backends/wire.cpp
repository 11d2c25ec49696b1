#include "segedit/backends/wire.hpp"
#include "segedit/core/serialization.hpp"

namespace segedit::wire {

using nlohmann::json;

namespace {

// Runs `fn`, turning any decode failure into a ContractViolation.
template <typename Fn>
auto decoded(char const* what, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (ContractViolation const&) {
        throw;
    } catch (json::exception const& e) {
        throw ContractViolation(std::string("malformed ") + what + ": " + e.what());
    } catch (Error const& e) {
        throw ContractViolation(std::string("malformed ") + what + ": " + e.what());
    }
}

} // namespace

json segment_request(ImageBuffer const& image, json const& params) {
    return {{"image", image_to_base64_png(image)}, {"params", params.is_object() ? params : json::object()}};
}

json segment_response(std::span<Segment const> segments) {
    json list = json::array();
    for (auto const& s : segments) {
        list.push_back(s);
    }
    return {{"segments", std::move(list)}};
}

std::vector<Segment> parse_segments(json const& body) {
    return decoded("segment response", [&] {
        std::vector<Segment> out;
        for (auto const& item : body.at("segments")) {
            out.push_back(item.get<Segment>());
        }
        return out;
    });
}

json score_request(std::span<ImageBuffer const> crops, std::string_view prompt) {
    json list = json::array();
    for (auto const& c : crops) {
        list.push_back(image_to_base64_png(c));
    }
    return {{"crops", std::move(list)}, {"prompt", std::string(prompt)}};
}

json score_response(std::span<double const> scores) {
    return {{"scores", std::vector<double>(scores.begin(), scores.end())}};
}

std::vector<double> parse_scores(json const& body) {
    return decoded("score response", [&] {
        std::vector<double> out;
        for (auto const& v : body.at("scores")) {
            if (!v.is_number()) {
                throw ContractViolation("score entries must be numbers");
            }
            out.push_back(v.get<double>());
        }
        return out;
    });
}

json inpaint_request(ImageBuffer const& image, Mask const& mask, std::string_view prompt, int64_t seed) {
    return {{"image", image_to_base64_png(image)}, {"mask", mask}, {"prompt", std::string(prompt)}, {"seed", seed}};
}

json inpaint_response(ImageBuffer const& image) {
    return {{"image", image_to_base64_png(image)}};
}

ImageBuffer parse_inpaint_image(json const& body) {
    return decoded("inpaint response",
                   [&] { return image_from_base64_png(body.at("image").get<std::string>()); });
}

json health(SegmenterInfo const& info) {
    json j = describe(info);
    j["role"] = "segmenter";
    return j;
}

json health(ScorerInfo const& info) {
    json j = describe(info);
    j["role"] = "scorer";
    return j;
}

json health(InpainterInfo const& info) {
    json j = describe(info);
    j["role"] = "inpainter";
    return j;
}

SegmenterInfo parse_segmenter_info(json const& body) {
    return decoded("health response", [&] {
        return SegmenterInfo{body.at("name").get<std::string>(), body.value("max_image_side", 0),
                             body.value("supports_overlapping_masks", false)};
    });
}

ScorerInfo parse_scorer_info(json const& body) {
    return decoded("health response", [&] {
        ScorerInfo info;
        info.name = body.at("name").get<std::string>();
        info.score_range = score_range_from_string(body.value("score_range", std::string("raw_logit")));
        info.languages = body.value("languages", std::vector<std::string>{});
        info.max_image_side = body.value("max_image_side", 0);
        return info;
    });
}

InpainterInfo parse_inpainter_info(json const& body) {
    return decoded("health response", [&] {
        return InpainterInfo{body.at("name").get<std::string>(), body.value("native_resolution", 0),
                             body.value("deterministic", false), body.value("accepts_seed", true)};
    });
}

} // namespace segedit::wire
