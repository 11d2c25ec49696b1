#pragma once

#include "segedit/core/error.hpp"
#include "segedit/core/image.hpp"
#include "segedit/core/segment.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace segedit {

enum class Role { segmenter, scorer, inpainter };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct SegmenterInfo {
    std::string name;
    int max_image_side = 0; // 0: unbounded
    bool supports_overlapping_masks = false;
};

enum class ScoreRange {
    raw_logit,    // unbounded real scores
    unit_interval // every score in [0, 1]
};

std::string_view to_string(ScoreRange range);
ScoreRange score_range_from_string(std::string_view name);

struct ScorerInfo {
    std::string name;
    ScoreRange score_range = ScoreRange::raw_logit;
    std::vector<std::string> languages; // BCP-47
    int max_image_side = 0;             // crops larger than this are downscaled; 0: unbounded
};

struct InpainterInfo {
    std::string name;
    int native_resolution = 0;
    bool deterministic = false;
    bool accepts_seed = true;
};

// Proposes candidate regions. `params` is backend-specific and may be empty.
class Segmenter {
  public:
    virtual ~Segmenter() = default;
    virtual SegmenterInfo const& info() const = 0;
    virtual std::vector<Segment> segment(ImageBuffer const& image, nlohmann::json const& params) const = 0;

    std::vector<Segment> segment(ImageBuffer const& image) const { return segment(image, nlohmann::json::object()); }
};

// Scores each crop against a text prompt. One finite value per crop.
class Scorer {
  public:
    virtual ~Scorer() = default;
    virtual ScorerInfo const& info() const = 0;
    virtual std::vector<double> score(std::span<ImageBuffer const> crops, std::string_view prompt) const = 0;
};

// Generates content for the masked region. Output has the input's dimensions.
class Inpainter {
  public:
    virtual ~Inpainter() = default;
    virtual InpainterInfo const& info() const = 0;
    virtual ImageBuffer inpaint(ImageBuffer const& image, Mask const& mask, std::string_view prompt,
                                int64_t seed) const = 0;
};

struct BackendStack {
    std::string stack_id;
    std::shared_ptr<Segmenter const> segmenter;
    std::shared_ptr<Scorer const> scorer;
    std::shared_ptr<Inpainter const> inpainter;
};

// Backend output that breaks its role's contract.
class ContractViolation : public Error {
  public:
    using Error::Error;
};

// Throw ContractViolation on the first broken invariant.
void check_segments(std::span<Segment const> segments, int image_width, int image_height,
                    bool allow_overlap);
void check_scores(std::span<double const> scores, std::size_t crop_count, ScoreRange range);
void check_inpaint_result(ImageBuffer const& input, ImageBuffer const& output);

nlohmann::json describe(SegmenterInfo const& info);
nlohmann::json describe(ScorerInfo const& info);
nlohmann::json describe(InpainterInfo const& info);

} // namespace segedit
