#include "segedit/service/store.hpp"
#include "segedit/core/png.hpp"
#include "segedit/core/serialization.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <regex>
#include <set>

namespace segedit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;

uint64_t fnv1a(std::span<uint8_t const> bytes) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

json selection_json(Selection const& sel) {
    json ranked = json::array();
    for (auto const& r : sel.all_ranked) {
        ranked.push_back({{"segment", r.segment},
                          {"raw_score", r.raw_score},
                          {"norm_score", r.norm_score},
                          {"rank", r.rank}});
    }
    return {{"outcome", sel.is_selected() ? "selected" : "no_match"},
            {"selected_segment_id", sel.is_selected() ? json(sel.selected->segment.segment_id) : json(nullptr)},
            {"threshold_used", sel.threshold_used},
            {"overridden", sel.overridden},
            {"ranked", std::move(ranked)}};
}

Selection parse_selection(json const& j) {
    Selection sel;
    sel.threshold_used = j.at("threshold_used").get<double>();
    sel.overridden = j.at("overridden").get<bool>();
    for (auto const& r : j.at("ranked")) {
        sel.all_ranked.push_back({r.at("segment").get<Segment>(), r.at("raw_score").get<double>(),
                                  r.at("norm_score").get<double>(), r.at("rank").get<int>()});
    }
    if (j.at("outcome").get<std::string>() == "selected") {
        auto id = j.at("selected_segment_id").get<std::string>();
        for (auto const& r : sel.all_ranked) {
            if (r.segment.segment_id == id) {
                sel.selected = r;
            }
        }
        if (!sel.selected) {
            throw Error("selected segment '" + id + "' is missing from the ranking");
        }
    }
    return sel;
}

std::string step_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "step-%04zu", index);
    return buf;
}

} // namespace

std::string utc_timestamp_now() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string image_file_name(std::string_view stem, ImageBuffer const& image) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(image.data())));
    return std::string(stem) + "-" + buf + ".png";
}

json session_document(SessionRecord const& record) {
    auto const& s = record.session;
    json steps = json::array();
    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        auto const& step = s.steps[i];
        json j{{"index", i + 1},
               {"instruction",
                {{"source_prompt", step.instruction.source_prompt}, {"target_prompt", step.instruction.target_prompt}}},
               {"seed", step.seed},
               {"status", to_string(step.status)},
               {"selection", selection_json(step.selection)},
               {"dilated_mask", step.dilated_mask},
               {"image", image_file_name(step_stem(i + 1), step.output_image)}};
        if (step.status == StepStatus::failed) {
            j["error"] = step.error;
        }
        steps.push_back(std::move(j));
    }
    return {{"schema", kSchemaVersion},
            {"session_id", s.session_id},
            {"created_at", record.created_at},
            {"config", s.config},
            {"width", s.base_image.width()},
            {"height", s.base_image.height()},
            {"base_image", image_file_name("base", s.base_image)},
            {"steps", std::move(steps)}};
}

SessionRecord parse_session_document(json const& doc,
                                     std::function<ImageBuffer(std::string const&)> const& load_image) {
    try {
        if (doc.at("schema").get<int>() != kSchemaVersion) {
            throw Error("unsupported session schema " + doc.at("schema").dump());
        }
        SessionRecord rec;
        rec.created_at = doc.at("created_at").get<std::string>();
        auto& s = rec.session;
        s.session_id = doc.at("session_id").get<std::string>();
        s.config = config_from_json(doc.at("config"));
        s.base_image = load_image(doc.at("base_image").get<std::string>());
        for (auto const& j : doc.at("steps")) {
            EditStep step;
            step.instruction = {j.at("instruction").at("source_prompt").get<std::string>(),
                                j.at("instruction").at("target_prompt").get<std::string>()};
            step.seed = j.at("seed").get<int64_t>();
            step.status = step_status_from_string(j.at("status").get<std::string>());
            step.error = j.value("error", std::string());
            step.selection = parse_selection(j.at("selection"));
            step.dilated_mask = j.at("dilated_mask").get<Mask>();
            step.output_image = load_image(j.at("image").get<std::string>());
            if (!step.output_image.same_size(s.base_image)) {
                throw Error("step image size differs from the base image");
            }
            s.steps.push_back(std::move(step));
        }
        return rec;
    } catch (json::exception const& e) {
        throw Error(std::string("malformed session document: ") + e.what());
    }
}

void write_file_atomic(fs::path const& path, std::string_view bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(bytes.data(), std::streamsize(bytes.size()));
        out.flush();
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

SessionStore SessionStore::from_environment() {
    char const* dir = std::getenv("SEGEDIT_STORE");
    return SessionStore(dir && *dir ? fs::path(dir) : fs::path("segedit-store"));
}

fs::path SessionStore::session_dir(std::string const& session_id) const {
    static std::regex const safe("[A-Za-z0-9_-]{1,128}");
    if (!std::regex_match(session_id, safe)) {
        throw UnknownSession("invalid session id '" + session_id + "'");
    }
    return root_ / session_id;
}

void SessionStore::save(SessionRecord const& record) const {
    fs::path dir = session_dir(record.session.session_id);
    fs::create_directories(dir);
    json doc = session_document(record);

    std::set<std::string> referenced{"session.json"};
    auto put_image = [&](std::string const& name, ImageBuffer const& image) {
        referenced.insert(name);
        if (!fs::exists(dir / name)) {
            auto png = encode_png(image);
            write_file_atomic(dir / name, {reinterpret_cast<char const*>(png.data()), png.size()});
        }
    };
    put_image(doc["base_image"].get<std::string>(), record.session.base_image);
    for (std::size_t i = 0; i < record.session.steps.size(); ++i) {
        put_image(doc["steps"][i]["image"].get<std::string>(), record.session.steps[i].output_image);
    }
    write_file_atomic(dir / "session.json", doc.dump(2) + "\n");

    // Drop images no longer referenced (e.g. after undo).
    for (auto const& entry : fs::directory_iterator(dir)) {
        auto name = entry.path().filename().string();
        if (entry.path().extension() == ".png" && !referenced.count(name)) {
            std::error_code ec;
            fs::remove(entry.path(), ec);
        }
    }
}

bool SessionStore::exists(std::string const& session_id) const {
    try {
        return fs::exists(session_dir(session_id) / "session.json");
    } catch (UnknownSession const&) {
        return false;
    }
}

SessionRecord SessionStore::load(std::string const& session_id) const {
    fs::path dir = session_dir(session_id);
    std::ifstream in(dir / "session.json");
    if (!in) {
        throw UnknownSession("unknown session '" + session_id + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (json::exception const& e) {
        throw Error("session " + session_id + " has a corrupt session.json: " + e.what());
    }
    return parse_session_document(doc, [&](std::string const& name) {
        if (name.find('/') != std::string::npos || name.find("..") != std::string::npos) {
            throw Error("invalid image reference '" + name + "'");
        }
        return read_png_file(dir / name);
    });
}

} // namespace segedit
