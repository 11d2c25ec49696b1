#include "segedit/backends/registry.hpp"
#include "segedit/backends/reference.hpp"
#include "segedit/backends/remote.hpp"

#include <cstdlib>
#include <fstream>

namespace segedit {

using nlohmann::json;

namespace {

RemoteEndpoint remote_endpoint(json const& spec) {
    RemoteEndpoint ep;
    ep.url = spec.at("endpoint").get<std::string>();
    ep.timeout = std::chrono::duration<double>(spec.value("timeout", 30.0));
    return ep;
}

std::string kind_of(json const& spec, char const* role) {
    if (!spec.is_object()) {
        throw InvalidArgument(std::string("registry entry is missing the ") + role);
    }
    auto kind = spec.value("kind", std::string());
    if (kind != "reference" && kind != "remote") {
        throw InvalidArgument(std::string(role) + " kind must be 'reference' or 'remote', got '" + kind + "'");
    }
    return kind;
}

BackendStack stack_from_json(json const& entry) {
    BackendStack stack;
    stack.stack_id = entry.at("stack_id").get<std::string>();

    json const& seg = entry.at("segmenter");
    if (kind_of(seg, "segmenter") == "reference") {
        ReferenceSegmenterParams p;
        p.quant_levels = seg.value("quant_levels", p.quant_levels);
        p.min_area_fraction = seg.value("min_area_fraction", p.min_area_fraction);
        stack.segmenter = std::make_shared<ReferenceSegmenter>(p);
    } else {
        stack.segmenter = std::make_shared<RemoteSegmenter>(remote_endpoint(seg), seg.value("params", json::object()));
    }

    json const& sc = entry.at("scorer");
    if (kind_of(sc, "scorer") == "reference") {
        stack.scorer = std::make_shared<ReferenceScorer>();
    } else {
        stack.scorer = std::make_shared<RemoteScorer>(remote_endpoint(sc));
    }

    json const& inp = entry.at("inpainter");
    if (kind_of(inp, "inpainter") == "reference") {
        stack.inpainter = std::make_shared<ReferenceInpainter>();
    } else {
        stack.inpainter = std::make_shared<RemoteInpainter>(remote_endpoint(inp));
    }
    return stack;
}

} // namespace

BackendRegistry BackendRegistry::with_reference() {
    BackendRegistry r;
    r.add(make_reference_stack());
    return r;
}

BackendRegistry BackendRegistry::from_json(json const& config) {
    if (!config.is_array()) {
        throw InvalidArgument("backend registry must be a JSON array of stacks");
    }
    BackendRegistry r;
    for (auto const& entry : config) {
        try {
            r.add(stack_from_json(entry));
        } catch (json::exception const& e) {
            throw InvalidArgument(std::string("malformed registry entry: ") + e.what());
        }
    }
    return r;
}

BackendRegistry BackendRegistry::from_file(std::filesystem::path const& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open backend registry " + path.string());
    }
    json config;
    try {
        config = json::parse(in);
    } catch (json::exception const& e) {
        throw InvalidArgument("backend registry " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(config);
}

BackendRegistry BackendRegistry::from_environment() {
    if (char const* path = std::getenv("SEGEDIT_REGISTRY"); path && *path) {
        return from_file(path);
    }
    return with_reference();
}

void BackendRegistry::add(BackendStack stack) {
    if (stack.stack_id.empty()) {
        throw InvalidArgument("stack_id must not be empty");
    }
    if (!stack.segmenter || !stack.scorer || !stack.inpainter) {
        throw InvalidArgument("stack '" + stack.stack_id + "' must provide segmenter, scorer and inpainter");
    }
    auto id = stack.stack_id;
    if (!stacks_.emplace(id, std::move(stack)).second) {
        throw InvalidArgument("duplicate stack_id '" + id + "'");
    }
}

BackendStack const& BackendRegistry::get(std::string const& stack_id) const {
    auto it = stacks_.find(stack_id);
    if (it == stacks_.end()) {
        throw UnknownStack("unknown backend stack '" + stack_id + "'");
    }
    return it->second;
}

std::vector<std::string> BackendRegistry::ids() const {
    std::vector<std::string> out;
    for (auto const& [id, _] : stacks_) {
        out.push_back(id);
    }
    return out;
}

json BackendRegistry::describe() const {
    json list = json::array();
    for (auto const& [id, s] : stacks_) {
        list.push_back({{"stack_id", id},
                        {"segmenter", segedit::describe(s.segmenter->info())},
                        {"scorer", segedit::describe(s.scorer->info())},
                        {"inpainter", segedit::describe(s.inpainter->info())}});
    }
    return list;
}

} // namespace segedit
