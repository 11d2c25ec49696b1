#pragma once

#include "segedit/backends/contracts.hpp"

#include <filesystem>
#include <map>

namespace segedit {

class UnknownStack : public Error {
  public:
    using Error::Error;
};

/// Named backend stacks.
///
/// Config file form (JSON array):
///   [{"stack_id": "lab",
///     "segmenter": {"kind": "reference", "quant_levels": 4, "min_area_fraction": 0.01},
///     "scorer":    {"kind": "remote", "endpoint": "http://host:8102", "timeout": 30},
///     "inpainter": {"kind": "remote", "endpoint": "http://host:8103", "timeout": 120}}]
class BackendRegistry {
  public:
    // Registry holding only the reference stack, id "reference".
    static BackendRegistry with_reference();
    // Remote entries are health-probed while loading.
    static BackendRegistry from_json(nlohmann::json const& config);
    static BackendRegistry from_file(std::filesystem::path const& path);
    // SEGEDIT_REGISTRY if set, otherwise with_reference().
    static BackendRegistry from_environment();

    // Throws InvalidArgument on a duplicate id or a missing role.
    void add(BackendStack stack);
    BackendStack const& get(std::string const& stack_id) const;
    bool contains(std::string const& stack_id) const { return stacks_.count(stack_id) != 0; }
    std::vector<std::string> ids() const;

    // [{stack_id, segmenter: {...}, scorer: {...}, inpainter: {...}}]
    nlohmann::json describe() const;

  private:
    std::map<std::string, BackendStack> stacks_;
};

} // namespace segedit
