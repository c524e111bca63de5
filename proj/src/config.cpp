#include "sarseg/config.hpp"

#include <charconv>
#include <fstream>

namespace sarseg {

Preset parse_preset(std::string_view name) {
  if (name == "published") return Preset::published;
  if (name == "phantom") return Preset::phantom;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(Preset p) {
  return p == Preset::published ? "published" : "phantom";
}

SolverConfig preset_config(Algorithm a, Preset p) {
  auto c = SolverConfig::defaults(a);
  if (p == Preset::published) return c;
  c.model.beta = 0.005;
  c.model.kernel_sigma = 3.0;
  switch (a) {
    case Algorithm::rdls:
      c.model.mu = 0.15;
      break;
    case Algorithm::sbrd:
      c.model.mu = 0.015;
      c.lambda = 2.5;
      c.alpha = 1.0;
      break;
    case Algorithm::fprd1:
    case Algorithm::fprd2:
      c.model.mu = 0.015;
      break;
  }
  return c;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return v;
}

int to_int(std::string_view key, std::string_view value) {
  int v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("bad integer '" + std::string(value) + "' for " + std::string(key));
  }
  return v;
}

}  // namespace

std::vector<Setting> parse_settings(std::istream& in, const std::string& source) {
  std::vector<Setting> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(source + ":" + std::to_string(number) + ": empty key or value");
    }
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

std::vector<Setting> read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config", path.string());
  return parse_settings(in, path.string());
}

void apply_setting(SolverConfig& cfg, std::string_view key, std::string_view value) {
  auto& m = cfg.model;
  if (key == "mu") m.mu = to_double(key, value);
  else if (key == "beta") m.beta = to_double(key, value);
  else if (key == "eps") m.eps = to_double(key, value);
  else if (key == "sigma") m.sigma = to_double(key, value);
  else if (key == "kernel_sigma") m.kernel_sigma = to_double(key, value);
  else if (key == "data_term") {
    try {
      m.data_term = parse_data_term(value);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
  }
  else if (key == "lambda") cfg.lambda = to_double(key, value);
  else if (key == "alpha") cfg.alpha = to_double(key, value);
  else if (key == "t") cfg.t = to_double(key, value);
  else if (key == "gamma") cfg.gamma = to_double(key, value);
  else if (key == "xi") cfg.xi = to_double(key, value);
  else if (key == "dt1") cfg.dt1 = to_double(key, value);
  else if (key == "dt2") cfg.dt2 = to_double(key, value);
  else if (key == "max_iter") cfg.max_iter = to_int(key, value);
  else if (key == "tol") cfg.tol = to_double(key, value);
  else if (key == "means_update_every") cfg.means_update_every = to_int(key, value);
  else if (key == "mask_patience") cfg.mask_patience = to_int(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_settings(SolverConfig& cfg, const std::vector<Setting>& settings) {
  for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
}

}  // namespace sarseg
