#pragma once

#include "segedit/pipeline/edit.hpp"

namespace segedit {

class IndexOutOfRange : public Error {
  public:
    using Error::Error;
};

/// Ordered chain of edits over a base image. Step k consumes the output of
/// step k-1 (step 0 consumes base_image); all images share one size.
struct EditSession {
    std::string session_id;
    ImageBuffer base_image;
    std::vector<EditStep> steps;
    PipelineConfig config;

    ImageBuffer const& current_image() const { return steps.empty() ? base_image : steps.back().output_image; }
    // Seed for the next step: config.seed + number of existing steps.
    int64_t next_seed() const { return config.seed + int64_t(steps.size()); }

    friend bool operator==(EditSession const&, EditSession const&) = default;
};

// 16 random lowercase hex digits.
std::string new_session_id();

/// Applies the instructions in order. Each step runs with seed
/// config.seed + index. Stops after the first failed step, which is recorded
/// with its error; a cancellation stops before recording the interrupted step.
EditSession run_session(ImageBuffer base_image, std::span<EditInstruction const> instructions,
                        BackendStack const& stack, PipelineConfig config, std::stop_token stop = {},
                        std::string session_id = {});

// Runs one more instruction on session.current_image() with the next seed.
// Errors propagate; the session itself is not modified.
EditStep next_step(EditSession const& session, EditInstruction const& instruction, BackendStack const& stack,
                   EditOptions const& options = {});

// First `to_step` steps of `session`; 0 restores the base image.
EditSession undo(EditSession const& session, std::size_t to_step);

} // namespace segedit
