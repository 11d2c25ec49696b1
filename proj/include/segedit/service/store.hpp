#pragma once

#include "segedit/pipeline/session.hpp"

#include <filesystem>
#include <functional>

namespace segedit {

class UnknownSession : public Error {
  public:
    using Error::Error;
};

struct SessionRecord {
    EditSession session;
    std::string created_at; // UTC, ISO-8601 with 'Z'

    friend bool operator==(SessionRecord const&, SessionRecord const&) = default;
};

std::string utc_timestamp_now();

// File name under which an image is stored: "<stem>-<content hash>.png".
std::string image_file_name(std::string_view stem, ImageBuffer const& image);

// Versioned ("schema": 1) session document. Images are referenced by file name.
nlohmann::json session_document(SessionRecord const& record);
SessionRecord parse_session_document(nlohmann::json const& doc,
                                     std::function<ImageBuffer(std::string const& file_name)> const& load_image);

/// Directory store: <root>/<session_id>/session.json plus one PNG per image.
/// Images are written before the JSON, and the JSON is replaced by rename, so
/// an interrupted save leaves the previous state readable.
class SessionStore {
  public:
    explicit SessionStore(std::filesystem::path root);
    // SEGEDIT_STORE, or ./segedit-store when unset.
    static SessionStore from_environment();

    void save(SessionRecord const& record) const;
    SessionRecord load(std::string const& session_id) const;
    bool exists(std::string const& session_id) const;

    std::filesystem::path const& root() const { return root_; }
    std::filesystem::path session_dir(std::string const& session_id) const;

  private:
    std::filesystem::path root_;
};

// Writes `bytes` to a temporary sibling and renames it over `path`.
void write_file_atomic(std::filesystem::path const& path, std::string_view bytes);

} // namespace segedit
