#pragma once

// JSON bodies of the model-server protocol:
//   GET  /health  -> {"role", "name", ...capabilities}
//   POST /segment {image: b64 PNG, params}           -> {segments: [...]}
//   POST /score   {crops: [b64 PNG], prompt}         -> {scores: [...]}
//   POST /inpaint {image: b64 PNG, mask, prompt, seed} -> {image: b64 PNG}

#include "segedit/backends/contracts.hpp"

namespace segedit::wire {

nlohmann::json segment_request(ImageBuffer const& image, nlohmann::json const& params);
nlohmann::json segment_response(std::span<Segment const> segments);
std::vector<Segment> parse_segments(nlohmann::json const& body);

nlohmann::json score_request(std::span<ImageBuffer const> crops, std::string_view prompt);
nlohmann::json score_response(std::span<double const> scores);
std::vector<double> parse_scores(nlohmann::json const& body);

nlohmann::json inpaint_request(ImageBuffer const& image, Mask const& mask, std::string_view prompt, int64_t seed);
nlohmann::json inpaint_response(ImageBuffer const& image);
ImageBuffer parse_inpaint_image(nlohmann::json const& body);

// Health body: role, name and the role's capability fields.
nlohmann::json health(SegmenterInfo const& info);
nlohmann::json health(ScorerInfo const& info);
nlohmann::json health(InpainterInfo const& info);

SegmenterInfo parse_segmenter_info(nlohmann::json const& body);
ScorerInfo parse_scorer_info(nlohmann::json const& body);
InpainterInfo parse_inpainter_info(nlohmann::json const& body);

} // namespace segedit::wire
