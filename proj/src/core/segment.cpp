#include "segedit/core/segment.hpp"
#include "segedit/core/error.hpp"

#include <cmath>

namespace segedit {

Segment make_segment(Mask mask, double backend_score, std::string segment_id) {
    Segment s;
    s.area = mask.area();
    s.bbox = bounding_box(mask);
    s.mask = std::move(mask);
    s.backend_score = backend_score;
    s.segment_id = std::move(segment_id);
    return s;
}

void validate_segment(Segment const& segment, int image_width, int image_height) {
    auto const& id = segment.segment_id;
    if (segment.mask.width() != image_width || segment.mask.height() != image_height) {
        throw Error("segment '" + id + "' mask is " + std::to_string(segment.mask.width()) + "x" +
                    std::to_string(segment.mask.height()) + ", image is " + std::to_string(image_width) + "x" +
                    std::to_string(image_height));
    }
    if (segment.area != segment.mask.area()) {
        throw Error("segment '" + id + "' area " + std::to_string(segment.area) + " does not match mask area " +
                    std::to_string(segment.mask.area()));
    }
    if (!(segment.bbox == bounding_box(segment.mask))) {
        throw Error("segment '" + id + "' bbox is not the tight bounding box of its mask");
    }
    if (!std::isfinite(segment.backend_score) || segment.backend_score < 0.0 || segment.backend_score > 1.0) {
        throw Error("segment '" + id + "' backend_score outside [0, 1]");
    }
}

} // namespace segedit
