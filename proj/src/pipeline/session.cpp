#include "segedit/pipeline/session.hpp"

#include <random>

namespace segedit {

std::string new_session_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    static constexpr char digits[] = "0123456789abcdef";
    uint64_t v = rng();
    std::string id(16, '0');
    for (auto& c : id) {
        c = digits[v & 0xF];
        v >>= 4;
    }
    return id;
}

EditStep next_step(EditSession const& session, EditInstruction const& instruction, BackendStack const& stack,
                   EditOptions const& options) {
    PipelineConfig step_config = session.config;
    step_config.seed = session.next_seed();
    return edit_once(session.current_image(), instruction, stack, step_config, options);
}

EditSession run_session(ImageBuffer base_image, std::span<EditInstruction const> instructions,
                        BackendStack const& stack, PipelineConfig config, std::stop_token stop,
                        std::string session_id) {
    if (instructions.empty()) {
        throw InvalidArgument("run_session needs at least one instruction");
    }
    if (base_image.empty()) {
        throw InvalidArgument("run_session needs a non-empty base image");
    }
    config.validate();

    EditSession session;
    session.session_id = session_id.empty() ? new_session_id() : std::move(session_id);
    session.base_image = std::move(base_image);
    session.config = std::move(config);

    for (auto const& instruction : instructions) {
        if (stop.stop_requested()) {
            break;
        }
        try {
            session.steps.push_back(next_step(session, instruction, stack, {std::nullopt, stop}));
        } catch (Cancelled const&) {
            break;
        } catch (std::exception const& e) {
            EditStep failed;
            failed.instruction = instruction;
            failed.seed = session.next_seed();
            failed.dilated_mask = Mask(session.base_image.width(), session.base_image.height());
            failed.output_image = session.current_image();
            failed.status = StepStatus::failed;
            failed.error = e.what();
            session.steps.push_back(std::move(failed));
            break;
        }
    }
    return session;
}

EditSession undo(EditSession const& session, std::size_t to_step) {
    if (to_step > session.steps.size()) {
        throw IndexOutOfRange("undo target " + std::to_string(to_step) + " is past the last step (" +
                              std::to_string(session.steps.size()) + ")");
    }
    EditSession out;
    out.session_id = session.session_id;
    out.base_image = session.base_image;
    out.config = session.config;
    out.steps.assign(session.steps.begin(), session.steps.begin() + std::ptrdiff_t(to_step));
    return out;
}

} // namespace segedit
