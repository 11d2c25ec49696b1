#pragma once

#include "segedit/ranking/ranking.hpp"

#include <json.hpp>

namespace segedit {

enum class NoMatchPolicy { skip, error };

std::string_view to_string(NoMatchPolicy policy);
NoMatchPolicy no_match_policy_from_string(std::string_view name);

struct PipelineConfig {
    std::string stack_id = "reference";
    CropSpec crop_spec;
    double temperature = 1.0;
    double threshold = 0.0;
    int dilation_radius = 3; // pixels
    int feather_radius = 2;  // pixels
    int64_t seed = 0;
    NoMatchPolicy on_no_match = NoMatchPolicy::skip;

    // Throws InvalidArgument when a field is out of range.
    void validate() const;
    friend bool operator==(PipelineConfig const&, PipelineConfig const&) = default;
};

// The default radii are tuned for 512-pixel images; this scales them to the
// longer side of a width x height image.
PipelineConfig default_config_for(int width, int height);

void to_json(nlohmann::json& j, PipelineConfig const& config);

// Fields absent from `j` keep their value from `base`. Unknown keys and
// out-of-range values throw InvalidArgument.
PipelineConfig config_from_json(nlohmann::json const& j, PipelineConfig base = {});

} // namespace segedit
