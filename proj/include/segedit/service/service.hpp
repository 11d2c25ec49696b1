#pragma once

#include "segedit/backends/registry.hpp"
#include "segedit/service/store.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>

namespace segedit {

// Error with the HTTP status it maps to.
class ServiceError : public Error {
  public:
    ServiceError(int status, std::string const& message) : Error(message), status_(status) {}
    int status() const { return status_; }

  private:
    int status_;
};

/// Session-oriented editing service, independent of the transport.
///
/// Every method returns the JSON body of the corresponding HTTP endpoint and
/// throws ServiceError carrying the HTTP status on failure. Mutations of one
/// session are serialized: a mutation that finds another one in flight fails
/// with 409 instead of waiting. Reads never wait on mutations.
class EditService {
  public:
    static constexpr int max_image_side = 4096;

    explicit EditService(BackendRegistry registry, std::optional<SessionStore> store = std::nullopt);

    // POST /v1/sessions -> {session_id}
    nlohmann::json create_session(std::span<uint8_t const> png, nlohmann::json const& config);
    // GET /v1/sessions/{id}
    nlohmann::json session_summary(std::string const& id);
    // POST /v1/sessions/{id}/rank {source_prompt} -> RankPreview
    nlohmann::json rank(std::string const& id, nlohmann::json const& body);
    // POST /v1/sessions/{id}/edit {source_prompt, target_prompt, override_segment_id?}
    nlohmann::json edit(std::string const& id, nlohmann::json const& body);
    // POST /v1/sessions/{id}/undo {to_step}
    nlohmann::json undo(std::string const& id, nlohmann::json const& body);
    // GET /v1/sessions/{id}/steps/{k}/image; k = 0 is the uploaded image.
    std::vector<uint8_t> step_image_png(std::string const& id, std::size_t step);
    // GET /v1/stacks
    nlohmann::json stacks() const;

    // Current state of a session (for in-process callers and tests).
    SessionRecord snapshot(std::string const& id);

    BackendRegistry const& registry() const { return registry_; }

  private:
    struct Entry {
        std::mutex mutation;
        mutable std::shared_mutex state;
        SessionRecord record;
    };

    std::shared_ptr<Entry> find(std::string const& id);
    SessionRecord read(Entry const& entry) const;
    void commit(Entry& entry, SessionRecord record);
    BackendStack const& stack_for(PipelineConfig const& config) const;

    BackendRegistry registry_;
    std::optional<SessionStore> store_;
    std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

// RankPreview body for a selection on an image of the given size.
nlohmann::json rank_preview_json(Selection const& selection, int width, int height);

} // namespace segedit
