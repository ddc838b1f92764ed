#include "hopc/config.hpp"

#include <fstream>
#include <sstream>

namespace hopc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_num(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T v{};
  if (!(is >> v)) throw ConfigError("config: bad value '" + value + "' for " + key);
  std::string rest;
  if (is >> rest) throw ConfigError("config: trailing text in value for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("config: bad boolean '" + value + "' for " + key);
}

std::vector<double> parse_list(const std::string& key, std::string value) {
  for (char& c : value)
    if (c == ',') c = ' ';
  std::istringstream is(value);
  std::vector<double> out;
  for (double v; is >> v;) out.push_back(v);
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

}  // namespace

ToolConfig parse_config(const std::string& text) {
  ToolConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (size_t hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    auto& s = cfg.setup;
    if (key == "grid.pitch") s.grid.pitch = parse_num<coord_t>(key, value);
    else if (key == "grid.width") s.grid.width = parse_num<int>(key, value);
    else if (key == "grid.height") s.grid.height = parse_num<int>(key, value);
    else if (key == "grid.origin_x") s.grid.origin_x = parse_num<coord_t>(key, value);
    else if (key == "grid.origin_y") s.grid.origin_y = parse_num<coord_t>(key, value);
    else if (key == "optics.wavelength") s.optics.wavelength = parse_num<double>(key, value);
    else if (key == "optics.na") s.optics.na = parse_num<double>(key, value);
    else if (key == "optics.kernel_count") s.optics.kernel_count = parse_num<int>(key, value);
    else if (key == "optics.kernel_weights") s.optics.kernel_weights = parse_list(key, value);
    else if (key == "optics.support_radius") s.optics.support_radius = parse_num<int>(key, value);
    else if (key == "resist.threshold") s.resist.threshold = parse_num<double>(key, value);
    else if (key == "resist.steepness") s.resist.steepness = parse_num<double>(key, value);
    else if (key == "ilt.max_iters") s.ilt.max_iters = parse_num<int>(key, value);
    else if (key == "ilt.step_size") s.ilt.step_size = parse_num<double>(key, value);
    else if (key == "ilt.mask_steepness") s.ilt.mask_steepness = parse_num<double>(key, value);
    else if (key == "ilt.stop_tol") s.ilt.stop_tol = parse_num<double>(key, value);
    else if (key == "ilt.line_search") s.ilt.line_search = parse_bool(key, value);
    else if (key == "mbopc.fragment_length") s.mbopc.fragment_length = parse_num<coord_t>(key, value);
    else if (key == "mbopc.step") s.mbopc.step = parse_num<coord_t>(key, value);
    else if (key == "mbopc.max_iters") s.mbopc.max_iters = parse_num<int>(key, value);
    else if (key == "mbopc.epe_tol") s.mbopc.epe_tol = parse_num<double>(key, value);
    else if (key == "mbopc.max_offset") s.mbopc.max_offset = parse_num<coord_t>(key, value);
    else if (key == "train.epochs") cfg.train.epochs = parse_num<int>(key, value);
    else if (key == "train.learning_rate") cfg.train.learning_rate = parse_num<double>(key, value);
    else if (key == "train.bbl_beta") cfg.train.bbl_beta = parse_num<double>(key, value);
    else if (key == "train.loss") {
      if (value == "plain-logistic") cfg.train.loss = LossKind::PlainLogistic;
      else if (value == "bbl-logistic") cfg.train.loss = LossKind::BblLogistic;
      else if (value == "auc-pairwise") cfg.train.loss = LossKind::AucPairwise;
      else throw ConfigError("config: unknown loss '" + value + "'");
    } else if (key == "train.phi") {
      if (value == "logistic") cfg.train.phi = PhiKind::Logistic;
      else if (value == "squared-hinge") cfg.train.phi = PhiKind::SquaredHinge;
      else throw ConfigError("config: unknown phi '" + value + "'");
    } else if (key == "features.block_grid") {
      cfg.dct_block_grid = parse_num<int>(key, value);
    } else if (key == "features.keep") {
      cfg.dct_keep = parse_num<int>(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

ToolConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hopc
