#include "segedit/pipeline/edit.hpp"
#include "segedit/core/composite.hpp"

namespace segedit {

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::segment: return "segment";
    case Stage::rank: return "rank";
    case Stage::select: return "select";
    case Stage::inpaint: return "inpaint";
    case Stage::composite: return "composite";
    }
    return "unknown";
}

StageError::StageError(Stage stage, std::string const& detail)
    : Error(std::string(to_string(stage)) + " stage: " + detail), stage_(stage) {}

std::string_view to_string(StepStatus status) {
    switch (status) {
    case StepStatus::applied: return "applied";
    case StepStatus::skipped_no_match: return "skipped_no_match";
    case StepStatus::failed: return "failed";
    }
    return "unknown";
}

StepStatus step_status_from_string(std::string_view name) {
    if (name == "applied") return StepStatus::applied;
    if (name == "skipped_no_match") return StepStatus::skipped_no_match;
    if (name == "failed") return StepStatus::failed;
    throw InvalidArgument("unknown step status '" + std::string(name) + "'");
}

namespace {

void check_stop(std::stop_token const& stop) {
    if (stop.stop_requested()) {
        throw Cancelled();
    }
}

template <typename Fn>
auto in_stage(Stage stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (StageError const&) {
        throw;
    } catch (Cancelled const&) {
        throw;
    } catch (std::exception const& e) {
        throw StageError(stage, e.what());
    }
}

std::vector<Segment> run_segmenter(ImageBuffer const& image, BackendStack const& stack) {
    auto segments = in_stage(Stage::segment, [&] {
        auto out = stack.segmenter->segment(image);
        check_segments(out, image.width(), image.height(), stack.segmenter->info().supports_overlapping_masks);
        return out;
    });
    if (segments.empty()) {
        throw NoSegmentsFound();
    }
    return segments;
}

std::vector<RankedSegment> run_ranking(ImageBuffer const& image, std::span<Segment const> segments,
                                       std::string_view prompt, BackendStack const& stack,
                                       PipelineConfig const& config) {
    return in_stage(Stage::rank, [&] {
        return rank_segments(image, segments, prompt, *stack.scorer, config.crop_spec, config.temperature);
    });
}

} // namespace

Selection preview_selection(ImageBuffer const& image, std::string_view source_prompt, BackendStack const& stack,
                            PipelineConfig const& config) {
    config.validate();
    auto segments = run_segmenter(image, stack);
    auto ranked = run_ranking(image, segments, source_prompt, stack, config);
    return in_stage(Stage::select, [&] { return select_target(std::move(ranked), config.threshold); });
}

EditStep edit_once(ImageBuffer const& image, EditInstruction const& instruction, BackendStack const& stack,
                   PipelineConfig const& config, EditOptions const& options) {
    if (image.empty()) {
        throw InvalidArgument("edit_once needs a non-empty image");
    }
    instruction.validate();
    config.validate();

    EditStep step;
    step.instruction = instruction;
    step.seed = config.seed;

    check_stop(options.stop);
    auto segments = run_segmenter(image, stack);

    check_stop(options.stop);
    auto ranked = run_ranking(image, segments, instruction.source_prompt, stack, config);

    if (options.override_segment_id) {
        try {
            step.selection = select_override(std::move(ranked), *options.override_segment_id, config.threshold);
        } catch (RankingError const& e) {
            throw UnknownSegment(e.what());
        }
    } else {
        step.selection = in_stage(Stage::select, [&] { return select_target(std::move(ranked), config.threshold); });
    }

    if (!step.selection.is_selected()) {
        auto const& best = step.selection.all_ranked.front();
        if (config.on_no_match == NoMatchPolicy::error) {
            throw NoMatch("no segment matched '" + instruction.source_prompt + "' (best " +
                          best.segment.segment_id + " scored " + std::to_string(best.norm_score) +
                          " < threshold " + std::to_string(config.threshold) + ")");
        }
        step.status = StepStatus::skipped_no_match;
        step.dilated_mask = Mask(image.width(), image.height());
        step.output_image = image;
        return step;
    }

    step.dilated_mask = dilate_mask(step.selection.selected->segment.mask, config.dilation_radius);

    check_stop(options.stop);
    auto generated = in_stage(Stage::inpaint, [&] {
        auto out = stack.inpainter->inpaint(image, step.dilated_mask, instruction.target_prompt, config.seed);
        check_inpaint_result(image, out);
        return out;
    });

    check_stop(options.stop);
    step.output_image = in_stage(Stage::composite,
                                 [&] { return composite(image, generated, step.dilated_mask, config.feather_radius); });
    step.status = StepStatus::applied;
    return step;
}

} // namespace segedit
