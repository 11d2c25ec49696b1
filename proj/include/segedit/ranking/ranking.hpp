#pragma once

#include "segedit/backends/contracts.hpp"

#include <optional>

namespace segedit {

enum class BackgroundMode {
    keep,  // surrounding pixels stay as they are
    blank, // pixels outside the segment become mid-gray
};

std::string_view to_string(BackgroundMode mode);
BackgroundMode background_mode_from_string(std::string_view name);

// How a segment is presented to the scorer.
struct CropSpec {
    double padding_fraction = 0.15; // of max(bbox width, bbox height), per side; <= 2.0
    BackgroundMode background = BackgroundMode::keep;

    void validate() const;
    friend bool operator==(CropSpec const&, CropSpec const&) = default;
};

struct RankedSegment {
    Segment segment;
    double raw_score = 0.0;
    double norm_score = 0.0;
    int rank = 0; // 1-based

    friend bool operator==(RankedSegment const&, RankedSegment const&) = default;
};

struct Selection {
    std::optional<RankedSegment> selected; // empty: no match
    double threshold_used = 0.0;
    std::vector<RankedSegment> all_ranked;
    // The selection was named by the caller instead of chosen by threshold.
    bool overridden = false;

    bool is_selected() const { return selected.has_value(); }
    friend bool operator==(Selection const&, Selection const&) = default;
};

class RankingError : public Error {
  public:
    using Error::Error;
};

// A scorer call failed; the message names the segments being scored.
class ScoringError : public Error {
  public:
    using Error::Error;
};

// Expanded bbox used by prepare_crop, clamped to the image.
BBox crop_region(BBox bbox, int image_width, int image_height, double padding_fraction);

ImageBuffer prepare_crop(ImageBuffer const& image, Segment const& segment, CropSpec const& spec);

// softmax(raw / temperature). Throws RankingError on non-finite input or an
// empty list, InvalidArgument on temperature <= 0.
std::vector<double> normalize_scores(std::span<double const> raw, double temperature);

/// Scores one crop per segment against `source_prompt` and orders the result
/// by normalized score descending, then larger area, then smaller segment_id.
std::vector<RankedSegment> rank_segments(ImageBuffer const& image, std::span<Segment const> segments,
                                         std::string_view source_prompt, Scorer const& scorer,
                                         CropSpec const& spec, double temperature);

// Picks rank 1 when its norm_score reaches `threshold`.
Selection select_target(std::vector<RankedSegment> ranked, double threshold);

// Selects the segment named `segment_id` regardless of rank or threshold.
Selection select_override(std::vector<RankedSegment> ranked, std::string const& segment_id, double threshold);

} // namespace segedit
