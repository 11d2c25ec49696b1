#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace segedit {

// Exit codes of `segedit edit`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSkipped = 2;

struct EditCommand {
    std::filesystem::path image;
    std::optional<std::string> script;
    std::optional<std::filesystem::path> script_file;
    std::optional<std::string> stack;
    std::optional<std::filesystem::path> config;
    std::filesystem::path out;
    std::optional<std::filesystem::path> steps_dir;
    std::optional<std::filesystem::path> report; // default: <steps-dir>/session.json or <out>.json
    std::optional<int64_t> seed;
};

// Runs a batch edit; returns kExitOk, kExitSkipped (some step matched
// nothing) or kExitFailure. Diagnostics go to `err`.
int run_edit_command(EditCommand const& cmd, std::ostream& err);

// Entry point of the `segedit` tool: edit | serve | serve-backend.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

} // namespace segedit
