#include "segedit/service/service.hpp"
#include "segedit/core/png.hpp"
#include "segedit/core/serialization.hpp"

namespace segedit {

using nlohmann::json;

namespace {

std::string step_url(std::string const& id, std::size_t k) {
    return "/v1/sessions/" + id + "/steps/" + std::to_string(k) + "/image";
}

std::string required_text(json const& body, char const* field) {
    if (!body.is_object() || !body.contains(field) || !body.at(field).is_string()) {
        throw ServiceError(400, std::string("body must contain string field '") + field + "'");
    }
    auto value = body.at(field).get<std::string>();
    if (value.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ServiceError(400, std::string("'") + field + "' must not be empty");
    }
    return value;
}

json step_summary(std::string const& id, std::size_t k, EditStep const& step) {
    json j{{"step", k},
           {"source_prompt", step.instruction.source_prompt},
           {"target_prompt", step.instruction.target_prompt},
           {"status", to_string(step.status)},
           {"seed", step.seed},
           {"selected_segment_id",
            step.selection.is_selected() ? json(step.selection.selected->segment.segment_id) : json(nullptr)},
           {"overridden", step.selection.overridden},
           {"image_url", step_url(id, k)}};
    if (step.status == StepStatus::failed) {
        j["error"] = step.error;
    }
    return j;
}

json summary_json(SessionRecord const& rec) {
    auto const& s = rec.session;
    json steps = json::array();
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        steps.push_back(step_summary(s.session_id, i + 1, s.steps[i]));
    }
    return {{"session_id", s.session_id},
            {"created_at", rec.created_at},
            {"width", s.base_image.width()},
            {"height", s.base_image.height()},
            {"config", s.config},
            {"current_step", s.steps.size()},
            {"base_image_url", step_url(s.session_id, 0)},
            {"current_image_url", step_url(s.session_id, s.steps.size())},
            {"steps", std::move(steps)}};
}

// Maps pipeline failures onto HTTP statuses.
[[noreturn]] void rethrow_as_service_error() {
    try {
        throw;
    } catch (ServiceError const&) {
        throw;
    } catch (NoMatch const& e) {
        throw ServiceError(422, e.what());
    } catch (NoSegmentsFound const& e) {
        throw ServiceError(422, e.what());
    } catch (UnknownSegment const& e) {
        throw ServiceError(400, e.what());
    } catch (StageError const& e) {
        throw ServiceError(502, e.what());
    } catch (UnknownStack const& e) {
        throw ServiceError(404, e.what());
    } catch (InvalidArgument const& e) {
        throw ServiceError(400, e.what());
    } catch (std::exception const& e) {
        throw ServiceError(500, e.what());
    }
}

} // namespace

json rank_preview_json(Selection const& sel, int width, int height) {
    json segments = json::array();
    for (auto const& r : sel.all_ranked) {
        segments.push_back({{"segment_id", r.segment.segment_id},
                            {"rank", r.rank},
                            {"norm_score", r.norm_score},
                            {"raw_score", r.raw_score},
                            {"area", r.segment.area},
                            {"bbox", r.segment.bbox},
                            {"backend_score", r.segment.backend_score},
                            {"mask", r.segment.mask}});
    }
    return {{"width", width},
            {"height", height},
            {"threshold", sel.threshold_used},
            {"outcome", sel.is_selected() ? "selected" : "no_match"},
            {"selected_segment_id", sel.is_selected() ? json(sel.selected->segment.segment_id) : json(nullptr)},
            {"segments", std::move(segments)}};
}

EditService::EditService(BackendRegistry registry, std::optional<SessionStore> store)
    : registry_(std::move(registry)), store_(std::move(store)) {}

BackendStack const& EditService::stack_for(PipelineConfig const& config) const {
    try {
        return registry_.get(config.stack_id);
    } catch (UnknownStack const& e) {
        throw ServiceError(404, e.what());
    }
}

std::shared_ptr<EditService::Entry> EditService::find(std::string const& id) {
    {
        std::shared_lock lock(sessions_mutex_);
        if (auto it = sessions_.find(id); it != sessions_.end()) {
            return it->second;
        }
    }
    if (!store_ || !store_->exists(id)) {
        throw ServiceError(404, "unknown session '" + id + "'");
    }
    SessionRecord rec;
    try {
        rec = store_->load(id);
    } catch (std::exception const& e) {
        throw ServiceError(500, e.what());
    }
    std::unique_lock lock(sessions_mutex_);
    auto [it, inserted] = sessions_.try_emplace(id);
    if (inserted) {
        it->second = std::make_shared<Entry>();
        it->second->record = std::move(rec);
    }
    return it->second;
}

SessionRecord EditService::read(Entry const& entry) const {
    std::shared_lock lock(entry.state);
    return entry.record;
}

void EditService::commit(Entry& entry, SessionRecord record) {
    if (store_) {
        try {
            store_->save(record);
        } catch (std::exception const& e) {
            throw ServiceError(500, std::string("persisting session failed: ") + e.what());
        }
    }
    std::unique_lock lock(entry.state);
    entry.record = std::move(record);
}

json EditService::create_session(std::span<uint8_t const> png, json const& config) {
    ImageBuffer image;
    try {
        image = decode_png(png);
    } catch (std::exception const& e) {
        throw ServiceError(400, std::string("image upload is not a valid PNG: ") + e.what());
    }
    if (image.width() > max_image_side || image.height() > max_image_side) {
        throw ServiceError(400, "image exceeds " + std::to_string(max_image_side) + "x" +
                                    std::to_string(max_image_side));
    }
    SessionRecord rec;
    try {
        rec.session.config = config_from_json(config.is_null() ? json::object() : config,
                                              default_config_for(image.width(), image.height()));
    } catch (InvalidArgument const& e) {
        throw ServiceError(400, e.what());
    }
    stack_for(rec.session.config);
    rec.session.session_id = new_session_id();
    rec.session.base_image = std::move(image);
    rec.created_at = utc_timestamp_now();

    auto entry = std::make_shared<Entry>();
    commit(*entry, std::move(rec));
    auto id = entry->record.session.session_id;
    {
        std::unique_lock lock(sessions_mutex_);
        sessions_.emplace(id, entry);
    }
    return {{"session_id", id}};
}

json EditService::session_summary(std::string const& id) {
    return summary_json(read(*find(id)));
}

SessionRecord EditService::snapshot(std::string const& id) {
    return read(*find(id));
}

json EditService::rank(std::string const& id, json const& body) {
    auto entry = find(id);
    auto prompt = required_text(body, "source_prompt");
    auto rec = read(*entry);
    auto const& s = rec.session;
    try {
        auto sel = preview_selection(s.current_image(), prompt, stack_for(s.config), s.config);
        json j = rank_preview_json(sel, s.base_image.width(), s.base_image.height());
        j["session_id"] = id;
        j["step"] = s.steps.size();
        j["source_prompt"] = prompt;
        return j;
    } catch (...) {
        rethrow_as_service_error();
    }
}

json EditService::edit(std::string const& id, json const& body) {
    auto entry = find(id);
    EditInstruction instruction{required_text(body, "source_prompt"), required_text(body, "target_prompt")};
    EditOptions options;
    if (body.contains("override_segment_id") && !body.at("override_segment_id").is_null()) {
        if (!body.at("override_segment_id").is_string()) {
            throw ServiceError(400, "override_segment_id must be a string");
        }
        options.override_segment_id = body.at("override_segment_id").get<std::string>();
    }

    std::unique_lock busy(entry->mutation, std::try_to_lock);
    if (!busy.owns_lock()) {
        throw ServiceError(409, "session '" + id + "' is busy with another edit");
    }
    auto rec = read(*entry);
    EditStep step;
    try {
        step = next_step(rec.session, instruction, stack_for(rec.session.config), options);
    } catch (...) {
        rethrow_as_service_error();
    }
    rec.session.steps.push_back(std::move(step));
    std::size_t k = rec.session.steps.size();
    json out = step_summary(id, k, rec.session.steps.back());
    out["session_id"] = id;
    out["selection"] = rank_preview_json(rec.session.steps.back().selection, rec.session.base_image.width(),
                                         rec.session.base_image.height());
    commit(*entry, std::move(rec));
    return out;
}

json EditService::undo(std::string const& id, json const& body) {
    auto entry = find(id);
    if (!body.is_object() || !body.contains("to_step") || !body.at("to_step").is_number_integer()) {
        throw ServiceError(400, "body must contain integer field 'to_step'");
    }
    auto to_step = body.at("to_step").get<int64_t>();
    if (to_step < 0) {
        throw ServiceError(400, "to_step must be >= 0");
    }

    std::unique_lock busy(entry->mutation, std::try_to_lock);
    if (!busy.owns_lock()) {
        throw ServiceError(409, "session '" + id + "' is busy with another edit");
    }
    auto rec = read(*entry);
    try {
        rec.session = segedit::undo(rec.session, std::size_t(to_step));
    } catch (IndexOutOfRange const& e) {
        throw ServiceError(400, e.what());
    }
    json out = summary_json(rec);
    commit(*entry, std::move(rec));
    return out;
}

std::vector<uint8_t> EditService::step_image_png(std::string const& id, std::size_t step) {
    auto rec = read(*find(id));
    auto const& s = rec.session;
    if (step > s.steps.size()) {
        throw ServiceError(404, "session '" + id + "' has no step " + std::to_string(step));
    }
    return encode_png(step == 0 ? s.base_image : s.steps[step - 1].output_image);
}

json EditService::stacks() const {
    return registry_.describe();
}

} // namespace segedit
