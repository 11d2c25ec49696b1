#pragma once

#include "segedit/core/mask.hpp"

#include <string>

namespace segedit {

struct Segment {
    Mask mask;
    int64_t area = 0;
    BBox bbox;
    double backend_score = 0.0; // segmenter confidence in [0, 1]
    std::string segment_id;

    friend bool operator==(Segment const&, Segment const&) = default;
};

// Derives area and bbox from the mask.
Segment make_segment(Mask mask, double backend_score, std::string segment_id);

// Throws Error describing the first broken invariant, if any.
void validate_segment(Segment const& segment, int image_width, int image_height);

} // namespace segedit
