#pragma once

#include "segedit/backends/contracts.hpp"

#include <optional>

namespace segedit {

// Deterministic, GPU-free stand-ins for the three model roles.

struct ReferenceSegmenterParams {
    int quant_levels = 4;
    double min_area_fraction = 0.0;
};

/// Quantizes each channel into `quant_levels` uniform bins and returns the
/// 4-connected components of equal quantized color whose area is at least
/// min_area_fraction of the image. Segments are disjoint, sorted by area
/// descending (ties: first pixel in raster order), ids "seg-0000", ...
std::vector<Segment> reference_segment(ImageBuffer const& image, ReferenceSegmenterParams const& params);

/// Sum over color words in the prompt of the fraction of crop pixels that
/// fall in that color's HSV class. Non-color words contribute nothing.
std::vector<double> reference_score(std::span<ImageBuffer const> crops, std::string_view prompt);

/// Fills the mask with the first color word's lexicon color, or with the
/// mean of the one-pixel ring around the mask when the prompt has none.
/// The seed is ignored.
ImageBuffer reference_inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt, int64_t seed);

enum class LexiconColor { red, green, blue, yellow, white, black, gray, orange, purple, cyan };

std::optional<LexiconColor> lexicon_color(std::string_view word);
Rgb lexicon_rgb(LexiconColor color);
bool matches_color(LexiconColor color, Rgb pixel);

// Lower-cased ASCII words; bytes >= 0x80 count as word characters.
std::vector<std::string> tokenize_prompt(std::string_view prompt);

class ReferenceSegmenter : public Segmenter {
  public:
    explicit ReferenceSegmenter(ReferenceSegmenterParams params = {});
    SegmenterInfo const& info() const override { return info_; }
    // Recognized params keys override the defaults: quant_levels, min_area_fraction.
    std::vector<Segment> segment(ImageBuffer const& image, nlohmann::json const& params) const override;
    using Segmenter::segment;

    ReferenceSegmenterParams const& params() const { return params_; }

  private:
    ReferenceSegmenterParams params_;
    SegmenterInfo info_;
};

class ReferenceScorer : public Scorer {
  public:
    ReferenceScorer();
    ScorerInfo const& info() const override { return info_; }
    std::vector<double> score(std::span<ImageBuffer const> crops, std::string_view prompt) const override;

  private:
    ScorerInfo info_;
};

class ReferenceInpainter : public Inpainter {
  public:
    ReferenceInpainter();
    InpainterInfo const& info() const override { return info_; }
    ImageBuffer inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                        int64_t seed) const override;

  private:
    InpainterInfo info_;
};

BackendStack make_reference_stack(std::string stack_id = "reference", ReferenceSegmenterParams params = {});

} // namespace segedit
