#include "nlos/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace nlos {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// "a,b,c" -> JSON array of numbers
json parse_number_list(const std::string& value, const std::string& where) {
  json arr = json::array();
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(where + ": empty list element");
    try {
      size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      arr.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(where + ": not a number: '" + item + "'");
    }
  }
  if (arr.empty()) throw ConfigError(where + ": empty list");
  return arr;
}

json scalar_to_json(const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  // Bare digit runs stay exact u64 (seeds); everything else numeric is double.
  if (!value.empty() && std::all_of(value.begin(), value.end(),
                                    [](unsigned char c) { return std::isdigit(c); })) {
    try {
      return json(std::stoull(value));
    } catch (const std::exception&) {
    }
  }
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  return value;  // plain string (paths, order names)
}

// Dotted key=value lines -> nested JSON object.
json keyvalue_to_json(const std::string& text, const std::string& origin) {
  json root = json::object();
  std::stringstream ss(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
      throw ConfigError(where + ": keys are section.name, got '" + key + "'");
    const std::string section = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);
    if (root.contains(section) && root[section].contains(name))
      throw ConfigError(where + ": duplicate key '" + key + "'");
    if (name == "shift_levels_m" && value.find('[') == std::string::npos)
      root[section][name] = parse_number_list(value, where);
    else
      root[section][name] = scalar_to_json(value);
  }
  return root;
}

// Pulls typed values out of a section while tracking which keys were used.
class Section {
 public:
  Section(const json& j, std::string name, const std::string& origin)
      : j_(j), name_(std::move(name)), origin_(origin) {}

  ~Section() = default;

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    used_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }

  double required_number(const std::string& key) {
    if (!has(key)) throw ConfigError(origin_ + ": missing required key " + name_ + "." + key);
    return number(key, 0.0);
  }

  int integer(const std::string& key, int fallback) {
    const double v = number(key, double(fallback));
    if (v != std::floor(v)) throw ConfigError(where(key) + ": expected an integer");
    return int(v);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    used_.insert(key);
    const json& v = j_.at(key);
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number()) return v.get<double>() != 0.0;
    throw ConfigError(where(key) + ": expected a boolean");
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    used_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> number_list(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    used_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected a list");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where(key) + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  uint64_t unsigned64(const std::string& key, uint64_t fallback) {
    if (!has(key)) return fallback;
    used_.insert(key);
    const json& v = j_.at(key);
    if (v.is_number_unsigned()) return v.get<uint64_t>();
    if (v.is_number()) {
      const double d = v.get<double>();
      if (d < 0 || d != std::floor(d)) throw ConfigError(where(key) + ": expected a seed >= 0");
      return uint64_t(d);
    }
    throw ConfigError(where(key) + ": expected a seed");
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key))
        throw ConfigError(origin_ + ": unknown key " + name_ + "." + key);
  }

 private:
  std::string where(const std::string& key) const { return origin_ + ": " + name_ + "." + key; }

  const json& j_;
  std::string name_;
  const std::string& origin_;
  std::set<std::string> used_;
};

const json kEmpty = json::object();

PipelineConfig from_json(const json& root, const std::string& origin) {
  if (!root.is_object()) throw ConfigError(origin + ": config must be an object");
  static const std::set<std::string> known = {"grid", "augment", "lct", "rescan", "io"};
  for (const auto& [key, value] : root.items())
    if (!known.count(key)) throw ConfigError(origin + ": unknown section '" + key + "'");

  PipelineConfig cfg;

  Section grid(root.contains("grid") ? root.at("grid") : kEmpty, "grid", origin);
  cfg.grid.nx = grid.integer("nx", cfg.grid.nx);
  cfg.grid.ny = grid.integer("ny", cfg.grid.ny);
  cfg.grid.nt = grid.integer("nt", cfg.grid.nt);
  cfg.grid.nz = grid.integer("nz", cfg.grid.nz);
  cfg.grid.wall_width_m = grid.required_number("wall_width_m");
  cfg.grid.bin_width_s = grid.required_number("bin_width_s");
  grid.reject_unknown();

  Section augment(root.contains("augment") ? root.at("augment") : kEmpty, "augment", origin);
  cfg.augment.albedo = augment.number("albedo", cfg.augment.albedo);
  cfg.augment.fwhm_ps = augment.number("fwhm_ps", cfg.augment.fwhm_ps);
  cfg.augment.shift_levels_m = augment.number_list("shift_levels_m", cfg.augment.shift_levels_m);
  cfg.augment.poisson = augment.boolean("poisson", cfg.augment.poisson);
  cfg.augment.seed = augment.unsigned64("seed", cfg.augment.seed);
  augment.reject_unknown();

  Section lct(root.contains("lct") ? root.at("lct") : kEmpty, "lct", origin);
  cfg.lct.alpha = lct.number("alpha", cfg.lct.alpha);
  cfg.lct.correction_path = lct.text("correction", cfg.lct.correction_path);
  lct.reject_unknown();

  Section rescan(root.contains("rescan") ? root.at("rescan") : kEmpty, "rescan", origin);
  cfg.rescan.scan_rate_hz = rescan.number("scan_rate_hz", cfg.rescan.scan_rate_hz);
  cfg.rescan.order = parse_scan_order(rescan.text("order", scan_order_name(cfg.rescan.order)));
  rescan.reject_unknown();

  Section io(root.contains("io") ? root.at("io") : kEmpty, "io", origin);
  cfg.io.input_dir = io.text("input_dir", cfg.io.input_dir);
  cfg.io.output_dir = io.text("output_dir", cfg.io.output_dir);
  cfg.io.meters_per_unit = io.number("meters_per_unit", cfg.io.meters_per_unit);
  io.reject_unknown();

  cfg.validate();
  return cfg;
}

}  // namespace

void PipelineConfig::validate() const {
  // grid complaints are config mistakes in this context, not bad data files
  try {
    grid.validate();
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  augment.validate();
  if (!(lct.alpha > 0.0)) throw ConfigError("lct.alpha must be > 0");
  if (!(rescan.scan_rate_hz > 0.0)) throw ConfigError("rescan.scan_rate_hz must be > 0");
  if (!(io.meters_per_unit > 0.0)) throw ConfigError("io.meters_per_unit must be > 0");
}

PipelineConfig parse_config_text(const std::string& text, const std::string& origin) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded()) throw ConfigError(origin + ": invalid JSON");
    return from_json(root, origin);
  }
  return from_json(keyvalue_to_json(text, origin), origin);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::string config_canonical(const PipelineConfig& cfg) {
  json j;
  j["grid"] = {{"nx", cfg.grid.nx},
               {"ny", cfg.grid.ny},
               {"nt", cfg.grid.nt},
               {"nz", cfg.grid.nz},
               {"wall_width_m", cfg.grid.wall_width_m},
               {"bin_width_s", cfg.grid.bin_width_s}};
  j["augment"] = {{"albedo", cfg.augment.albedo},
                  {"fwhm_ps", cfg.augment.fwhm_ps},
                  {"shift_levels_m", cfg.augment.shift_levels_m},
                  {"poisson", cfg.augment.poisson},
                  {"seed", cfg.augment.seed}};
  j["lct"] = {{"alpha", cfg.lct.alpha}, {"correction", cfg.lct.correction_path}};
  j["rescan"] = {{"scan_rate_hz", cfg.rescan.scan_rate_hz},
                 {"order", scan_order_name(cfg.rescan.order)}};
  j["io"] = {{"input_dir", cfg.io.input_dir},
             {"output_dir", cfg.io.output_dir},
             {"meters_per_unit", cfg.io.meters_per_unit}};
  return j.dump();  // nlohmann objects keep keys sorted
}

uint64_t config_hash(const PipelineConfig& cfg) {
  // FNV-1a 64
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : config_canonical(cfg)) {
    h ^= uint8_t(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string scan_order_name(ScanOrder order) {
  return order == ScanOrder::RowMajor ? "rowmajor" : "serpentine";
}

ScanOrder parse_scan_order(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "rowmajor" || lower == "row_major") return ScanOrder::RowMajor;
  if (lower == "serpentine") return ScanOrder::Serpentine;
  throw ConfigError("unknown scan order '" + name + "' (rowmajor|serpentine)");
}

}  // namespace nlos
