#pragma once

#include "segedit/backends/contracts.hpp"
#include "segedit/pipeline/config.hpp"
#include "segedit/pipeline/instruction.hpp"

#include <optional>
#include <stop_token>

namespace segedit {

enum class Stage { segment, rank, select, inpaint, composite };
std::string_view to_string(Stage stage);

// Failure inside one pipeline stage; the message is prefixed with the stage.
class StageError : public Error {
  public:
    StageError(Stage stage, std::string const& detail);
    Stage stage() const { return stage_; }

  private:
    Stage stage_;
};

class NoSegmentsFound : public StageError {
  public:
    NoSegmentsFound() : StageError(Stage::segment, "segmenter returned no segments") {}
};

class NoMatch : public StageError {
  public:
    explicit NoMatch(std::string const& detail) : StageError(Stage::select, detail) {}
};

// override_segment_id does not name a segment of the current image.
class UnknownSegment : public StageError {
  public:
    explicit UnknownSegment(std::string const& detail) : StageError(Stage::select, detail) {}
};

class Cancelled : public Error {
  public:
    Cancelled() : Error("edit cancelled") {}
};

enum class StepStatus { applied, skipped_no_match, failed };
std::string_view to_string(StepStatus status);
StepStatus step_status_from_string(std::string_view name);

struct EditStep {
    EditInstruction instruction;
    Selection selection;
    Mask dilated_mask;        // region handed to the inpainter
    ImageBuffer output_image; // equals the step input unless applied
    int64_t seed = 0;
    StepStatus status = StepStatus::applied;
    std::string error; // set when failed

    friend bool operator==(EditStep const&, EditStep const&) = default;
};

struct EditOptions {
    // Use this segment instead of the threshold selection.
    std::optional<std::string> override_segment_id;
    std::stop_token stop;
};

/// segment -> rank(source prompt) -> select -> dilate -> inpaint(target
/// prompt, config.seed) -> composite.
///
/// Returns an applied step, or a skipped_no_match step when nothing clears
/// the threshold and config.on_no_match is skip. Throws NoSegmentsFound,
/// NoMatch (policy error), UnknownSegment, StageError wrapping backend
/// failures, or Cancelled when `options.stop` is requested between stages.
EditStep edit_once(ImageBuffer const& image, EditInstruction const& instruction, BackendStack const& stack,
                   PipelineConfig const& config, EditOptions const& options = {});

// Segments and ranks `image` without editing it (the first two stages).
Selection preview_selection(ImageBuffer const& image, std::string_view source_prompt, BackendStack const& stack,
                            PipelineConfig const& config);

} // namespace segedit
