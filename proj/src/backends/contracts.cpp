#include "segedit/backends/contracts.hpp"

#include <cmath>
#include <set>

namespace segedit {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::segmenter: return "segmenter";
    case Role::scorer: return "scorer";
    case Role::inpainter: return "inpainter";
    }
    return "unknown";
}

Role role_from_string(std::string_view name) {
    if (name == "segmenter") return Role::segmenter;
    if (name == "scorer") return Role::scorer;
    if (name == "inpainter") return Role::inpainter;
    throw InvalidArgument("unknown backend role '" + std::string(name) + "'");
}

std::string_view to_string(ScoreRange range) {
    return range == ScoreRange::unit_interval ? "unit" : "raw_logit";
}

ScoreRange score_range_from_string(std::string_view name) {
    if (name == "unit") return ScoreRange::unit_interval;
    if (name == "raw_logit") return ScoreRange::raw_logit;
    throw InvalidArgument("unknown score range '" + std::string(name) + "'");
}

void check_segments(std::span<Segment const> segments, int image_width, int image_height, bool allow_overlap) {
    std::set<std::string_view> ids;
    for (auto const& s : segments) {
        try {
            validate_segment(s, image_width, image_height);
        } catch (ContractViolation const&) {
            throw;
        } catch (Error const& e) {
            throw ContractViolation(e.what());
        }
        if (s.segment_id.empty()) {
            throw ContractViolation("segment has an empty segment_id");
        }
        if (!ids.insert(s.segment_id).second) {
            throw ContractViolation("duplicate segment_id '" + s.segment_id + "'");
        }
    }
    if (!allow_overlap) {
        for (std::size_t i = 0; i < segments.size(); ++i) {
            for (std::size_t j = i + 1; j < segments.size(); ++j) {
                if (intersection_area(segments[i].mask, segments[j].mask) != 0) {
                    throw ContractViolation("segments '" + segments[i].segment_id + "' and '" +
                                            segments[j].segment_id +
                                            "' overlap but the segmenter declares disjoint masks");
                }
            }
        }
    }
}

void check_scores(std::span<double const> scores, std::size_t crop_count, ScoreRange range) {
    if (scores.size() != crop_count) {
        throw ContractViolation("scorer returned " + std::to_string(scores.size()) + " scores for " +
                                std::to_string(crop_count) + " crops");
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        double v = scores[i];
        if (!std::isfinite(v)) {
            throw ContractViolation("score " + std::to_string(i) + " is not finite");
        }
        if (range == ScoreRange::unit_interval && (v < 0.0 || v > 1.0)) {
            throw ContractViolation("score " + std::to_string(i) + " outside declared range [0, 1]");
        }
    }
}

void check_inpaint_result(ImageBuffer const& input, ImageBuffer const& output) {
    if (!input.same_size(output)) {
        throw ContractViolation("inpainter returned " + std::to_string(output.width()) + "x" +
                                std::to_string(output.height()) + " for a " + std::to_string(input.width()) +
                                "x" + std::to_string(input.height()) + " input");
    }
}

nlohmann::json describe(SegmenterInfo const& info) {
    return {{"name", info.name},
            {"max_image_side", info.max_image_side},
            {"supports_overlapping_masks", info.supports_overlapping_masks}};
}

nlohmann::json describe(ScorerInfo const& info) {
    return {{"name", info.name},
            {"score_range", to_string(info.score_range)},
            {"languages", info.languages},
            {"max_image_side", info.max_image_side}};
}

nlohmann::json describe(InpainterInfo const& info) {
    return {{"name", info.name},
            {"native_resolution", info.native_resolution},
            {"deterministic", info.deterministic},
            {"accepts_seed", info.accepts_seed}};
}

} // namespace segedit
