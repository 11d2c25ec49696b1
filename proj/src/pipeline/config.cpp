#include "segedit/pipeline/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace segedit {

using nlohmann::json;

namespace {

constexpr double kRadiusReferenceSide = 512.0;

} // namespace

std::string_view to_string(NoMatchPolicy policy) {
    return policy == NoMatchPolicy::error ? "error" : "skip";
}

NoMatchPolicy no_match_policy_from_string(std::string_view name) {
    if (name == "skip") return NoMatchPolicy::skip;
    if (name == "error") return NoMatchPolicy::error;
    throw InvalidArgument("on_no_match must be 'skip' or 'error'");
}

void PipelineConfig::validate() const {
    if (stack_id.empty()) {
        throw InvalidArgument("stack_id must not be empty");
    }
    crop_spec.validate();
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw InvalidArgument("temperature must be a finite value > 0");
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("threshold must be in [0, 1]");
    }
    if (dilation_radius < 0) {
        throw InvalidArgument("dilation_radius must be >= 0");
    }
    if (feather_radius < 0) {
        throw InvalidArgument("feather_radius must be >= 0");
    }
}

PipelineConfig default_config_for(int width, int height) {
    PipelineConfig c;
    double scale = std::max(width, height) / kRadiusReferenceSide;
    c.dilation_radius = int(std::lround(c.dilation_radius * scale));
    c.feather_radius = int(std::lround(c.feather_radius * scale));
    return c;
}

void to_json(json& j, PipelineConfig const& c) {
    j = json{{"stack_id", c.stack_id},
             {"crop_spec",
              {{"padding_fraction", c.crop_spec.padding_fraction},
               {"background_mode", to_string(c.crop_spec.background)}}},
             {"temperature", c.temperature},
             {"threshold", c.threshold},
             {"dilation_radius", c.dilation_radius},
             {"feather_radius", c.feather_radius},
             {"seed", c.seed},
             {"on_no_match", to_string(c.on_no_match)}};
}

PipelineConfig config_from_json(json const& j, PipelineConfig base) {
    if (!j.is_object()) {
        throw InvalidArgument("pipeline config must be a JSON object");
    }
    static std::set<std::string> const known{"stack_id",       "crop_spec",     "temperature", "threshold",
                                             "dilation_radius", "feather_radius", "seed",        "on_no_match"};
    for (auto const& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw InvalidArgument("unknown pipeline config field '" + key + "'");
        }
    }
    PipelineConfig c = std::move(base);
    try {
        c.stack_id = j.value("stack_id", c.stack_id);
        if (j.contains("crop_spec")) {
            auto const& cs = j.at("crop_spec");
            if (!cs.is_object()) {
                throw InvalidArgument("crop_spec must be an object");
            }
            c.crop_spec.padding_fraction = cs.value("padding_fraction", c.crop_spec.padding_fraction);
            if (cs.contains("background_mode")) {
                c.crop_spec.background = background_mode_from_string(cs.at("background_mode").get<std::string>());
            }
        }
        c.temperature = j.value("temperature", c.temperature);
        c.threshold = j.value("threshold", c.threshold);
        c.dilation_radius = j.value("dilation_radius", c.dilation_radius);
        c.feather_radius = j.value("feather_radius", c.feather_radius);
        c.seed = j.value("seed", c.seed);
        if (j.contains("on_no_match")) {
            c.on_no_match = no_match_policy_from_string(j.at("on_no_match").get<std::string>());
        }
    } catch (json::exception const& e) {
        throw InvalidArgument(std::string("malformed pipeline config: ") + e.what());
    }
    c.validate();
    return c;
}

} // namespace segedit
