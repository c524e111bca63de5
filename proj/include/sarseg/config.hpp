#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sarseg/solvers.hpp"

namespace sarseg {

// published: the parameter sets of SolverConfig::defaults.
// phantom: settings tuned for 8-bit two-phase speckle phantoms (c1=200,
// c2=50), where the published edge weight leaves almost no regularization.
enum class Preset { published, phantom };

Preset parse_preset(std::string_view name);
std::string_view to_string(Preset p);

SolverConfig preset_config(Algorithm a, Preset p);

using Setting = std::pair<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment, blank lines are skipped.
/// `source` names the input in error messages.
std::vector<Setting> parse_settings(std::istream& in, const std::string& source);
std::vector<Setting> read_settings(const std::filesystem::path& path);

/// Keys: mu beta eps sigma kernel_sigma data_term lambda alpha t gamma xi
/// dt1 dt2 max_iter tol means_update_every mask_patience.
/// Throws ConfigError for unknown keys or unparsable values.
void apply_setting(SolverConfig& cfg, std::string_view key, std::string_view value);
void apply_settings(SolverConfig& cfg, const std::vector<Setting>& settings);

}  // namespace sarseg
