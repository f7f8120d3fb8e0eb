#include "lensbeam/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

#include "lensbeam/errors.hpp"

namespace lensbeam::cli {

namespace {

using sim::ScenarioConfig;
using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

struct KeySpec {
  std::string_view key;
  std::string_view section;
  Setter set;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view expected, std::string_view value) {
  throw ConfigError("expected " + std::string(expected) + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    bad_value("a number", s);
  }
  return v;
}

template <typename Int>
Int to_integer(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    bad_value("an integer", s);
  }
  return v;
}

std::vector<double> to_list(std::string_view s) {
  std::vector<double> out;
  s = trim(s);
  if (s.empty()) {
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(to_double(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

sim::LinkMode to_mode(std::string_view s) {
  s = trim(s);
  if (s == "dl" || s == "downlink") {
    return sim::LinkMode::downlink;
  }
  if (s == "ul" || s == "uplink") {
    return sim::LinkMode::uplink;
  }
  bad_value("'dl' or 'ul'", s);
}

sim::FilterSelection to_filter(std::string_view s) {
  s = trim(s);
  if (s == "ukf") {
    return sim::FilterSelection::ukf;
  }
  if (s == "ekf") {
    return sim::FilterSelection::ekf;
  }
  if (s == "both") {
    return sim::FilterSelection::both;
  }
  bad_value("'ukf', 'ekf' or 'both'", s);
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table{
      {"mode", "", [](ScenarioConfig& c, std::string_view v) { c.mode = to_mode(v); }},
      {"n_bs", "array", [](ScenarioConfig& c, std::string_view v) { c.n_bs = to_integer<int>(v); }},
      {"n_ue", "array", [](ScenarioConfig& c, std::string_view v) { c.n_ue = to_integer<int>(v); }},
      {"spacing_ratio", "array",
       [](ScenarioConfig& c, std::string_view v) { c.spacing_ratio = to_double(v); }},
      {"carrier_ghz", "array",
       [](ScenarioConfig& c, std::string_view v) { c.carrier_ghz = to_double(v); }},
      {"k_users", "channel",
       [](ScenarioConfig& c, std::string_view v) { c.k_users = to_integer<int>(v); }},
      {"paths_tracked_user", "channel",
       [](ScenarioConfig& c, std::string_view v) { c.paths_tracked_user = to_integer<int>(v); }},
      {"paths_other_users", "channel",
       [](ScenarioConfig& c, std::string_view v) { c.paths_other_users = to_integer<int>(v); }},
      {"sigma2", "channel", [](ScenarioConfig& c, std::string_view v) { c.sigma2 = to_double(v); }},
      {"rho", "channel", [](ScenarioConfig& c, std::string_view v) { c.rho = to_double(v); }},
      {"snr_db", "channel", [](ScenarioConfig& c, std::string_view v) { c.snr_db = to_double(v); }},
      {"path_loss", "channel",
       [](ScenarioConfig& c, std::string_view v) { c.path_loss = to_list(v); }},
      {"filter", "filter", [](ScenarioConfig& c, std::string_view v) { c.filter = to_filter(v); }},
      {"ut_gamma", "filter", [](ScenarioConfig& c, std::string_view v) { c.ut_gamma = to_list(v); }},
      {"ut_kappa", "filter", [](ScenarioConfig& c, std::string_view v) { c.ut_kappa = to_list(v); }},
      {"ut_beta", "filter", [](ScenarioConfig& c, std::string_view v) { c.ut_beta = to_double(v); }},
      {"n_slots", "run", [](ScenarioConfig& c, std::string_view v) { c.n_slots = to_integer<int>(v); }},
      {"n_runs", "run", [](ScenarioConfig& c, std::string_view v) { c.n_runs = to_integer<int>(v); }},
      {"seed", "run",
       [](ScenarioConfig& c, std::string_view v) { c.seed = to_integer<std::uint64_t>(v); }},
  };
  return table;
}

const KeySpec* find_key(std::string_view key) {
  const auto& table = key_table();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const KeySpec& k) { return k.key == key; });
  return it == table.end() ? nullptr : &*it;
}

struct Entry {
  std::string key;
  std::string value;
  std::string where;  // "file:line" or "override"
};

std::vector<Entry> read_entries(std::string_view text, std::string_view origin) {
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + ": malformed section header '" + std::string(line) + "'");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "array" && section != "channel" && section != "filter" && section != "run") {
        throw ConfigError(where + ": unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const KeySpec* spec = find_key(key);
    if (spec == nullptr) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (!section.empty() && spec->section != section) {
      throw ConfigError(where + ": key '" + key + "' belongs in section [" +
                        std::string(spec->section.empty() ? "top level" : spec->section) +
                        "], found in [" + section + "]");
    }
    entries.push_back(Entry{key, std::string(trim(line.substr(eq + 1))), where});
  }
  return entries;
}

}  // namespace

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(text) + "': expected key=value");
  }
  Override o{std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
  if (o.key.empty()) {
    throw ConfigError("override '" + std::string(text) + "': empty key");
  }
  return o;
}

sim::ScenarioConfig parse_config_text(std::string_view text, std::span<const Override> overrides,
                                      std::string_view origin) {
  std::vector<Entry> entries = read_entries(text, origin);
  for (const auto& o : overrides) {
    if (find_key(o.key) == nullptr) {
      throw ConfigError("override: unknown key '" + o.key + "'");
    }
    entries.push_back(Entry{o.key, o.value, "override " + o.key});
  }

  // The last `mode` wins and selects the table defaults.
  sim::LinkMode mode = sim::LinkMode::downlink;
  for (const auto& e : entries) {
    if (e.key == "mode") {
      try {
        mode = to_mode(e.value);
      } catch (const ConfigError& err) {
        throw ConfigError(e.where + ": key 'mode': " + err.what());
      }
    }
  }
  ScenarioConfig cfg = ScenarioConfig::table_defaults(mode);
  for (const auto& e : entries) {
    try {
      find_key(e.key)->set(cfg, e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.where + ": key '" + e.key + "': " + err.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(std::string(origin) + ": " + err.what());
  }
  return cfg;
}

sim::ScenarioConfig parse_config(const std::filesystem::path& path,
                                 std::span<const Override> overrides) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides, path.string());
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& k : key_table()) {
    keys.emplace_back(k.key);
  }
  return keys;
}

}  // namespace lensbeam::cli
