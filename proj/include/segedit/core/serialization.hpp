#pragma once

#include "segedit/core/segment.hpp"

#include <json.hpp>

namespace segedit {

// Mask: {"w": int, "h": int, "runs": [[start, length], ...]}
void to_json(nlohmann::json& j, Mask const& mask);
void from_json(nlohmann::json const& j, Mask& mask);

// BBox: [x0, y0, x1, y1]
void to_json(nlohmann::json& j, BBox const& box);
void from_json(nlohmann::json const& j, BBox& box);

// Segment: {mask, area, bbox, backend_score, segment_id}
void to_json(nlohmann::json& j, Segment const& segment);
void from_json(nlohmann::json const& j, Segment& segment);

// PNG bytes, base64-encoded.
std::string image_to_base64_png(ImageBuffer const& image);
ImageBuffer image_from_base64_png(std::string_view text);

} // namespace segedit
