#include "esav/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace esav {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

/// Plain number, or a multiple of pi such as "pi", "2pi", "2*pi".
double parse_double(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  double scale = 1.0;
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    v = trim(v.substr(0, v.size() - 2));
    if (!v.empty() && v.back() == '*') v = trim(v.substr(0, v.size() - 1));
    if (v.empty()) return scale;
  }
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    throw ConfigError(key + ": '" + raw + "' is not a number");
  return x * scale;
}

long long parse_integer(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size()) throw ConfigError(key + ": '" + raw + "' is not an integer");
  return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size())
    throw ConfigError(key + ": '" + raw + "' is not an unsigned integer");
  return x;
}

int parse_int(const std::string& key, const std::string& raw) {
  const long long x = parse_integer(key, raw);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(key + ": '" + raw + "' is out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + raw + "' is not a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  const std::string v = trim(raw);
  if (v.empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::string show(double v) { return format_double(v); }

std::string show_list(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + show(v[i]);
  return s;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

struct KeyDef {
  std::string name;  // section.key
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Get, typename Set>
KeyDef number(std::string name, Get get, Set set) {
  return {std::move(name), [set](RunConfig& c, const std::string& k, const std::string& v) { set(c, parse_double(k, v)); },
          [get](const RunConfig& c) { return show(get(c)); }};
}

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back({"run.example", [](RunConfig& c, const std::string&, const std::string& v) { c.example = v; },
                 [](const RunConfig& c) { return quoted(c.example); }});
    t.push_back({"run.scheme",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   try {
                     c.scheme = scheme_from_string(v);
                   } catch (const InvalidArgument& e) {
                     throw ConfigError(k + ": " + e.what());
                   }
                 },
                 [](const RunConfig& c) { return quoted(std::string(to_string(c.scheme))); }});
    t.push_back(number("run.dt", [](const RunConfig& c) { return c.dt; }, [](RunConfig& c, double x) { c.dt = x; }));
    t.push_back(number("run.t_final", [](const RunConfig& c) { return c.t_final; },
                       [](RunConfig& c, double x) { c.t_final = x; }));
    t.push_back({"run.seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_unsigned(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    t.push_back({"run.initial", [](RunConfig& c, const std::string&, const std::string& v) { c.initial = v; },
                 [](const RunConfig& c) { return quoted(c.initial); }});
    t.push_back({"run.out", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; },
                 [](const RunConfig& c) { return quoted(c.out_dir); }});
    t.push_back({"run.snapshot_times",
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.snapshot_times = parse_list(k, v); },
                 [](const RunConfig& c) { return show_list(c.snapshot_times); }});
    t.push_back({"run.trace_every",
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.trace_every = parse_int(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.trace_every); }});
    t.push_back({"run.checks", [](RunConfig& c, const std::string& k, const std::string& v) { c.checks = parse_bool(k, v); },
                 [](const RunConfig& c) { return std::string(c.checks ? "true" : "false"); }});
    t.push_back({"run.esav_c",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   if (trim(v) == "auto") c.esav_c.reset();
                   else c.esav_c = parse_double(k, v);
                 },
                 [](const RunConfig& c) { return c.esav_c ? show(*c.esav_c) : std::string("auto"); }});
    t.push_back(number("run.sav_c", [](const RunConfig& c) { return c.sav_c; }, [](RunConfig& c, double x) { c.sav_c = x; }));

    t.push_back({"grid.nx", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.nx = parse_int(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.grid.nx); }});
    t.push_back({"grid.ny", [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.ny = parse_int(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.grid.ny); }});
    t.push_back(number("grid.lx", [](const RunConfig& c) { return c.grid.lx; }, [](RunConfig& c, double x) { c.grid.lx = x; }));
    t.push_back(number("grid.ly", [](const RunConfig& c) { return c.grid.ly; }, [](RunConfig& c, double x) { c.grid.ly = x; }));

    t.push_back({"model.kind",
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   try {
                     c.model.kind = model_kind_from_string(v);
                   } catch (const InvalidArgument& e) {
                     throw ConfigError(k + ": " + e.what());
                   }
                 },
                 [](const RunConfig& c) { return quoted(std::string(to_string(c.model.kind))); }});
    t.push_back(number("model.epsilon", [](const RunConfig& c) { return c.model.epsilon; },
                       [](RunConfig& c, double x) { c.model.epsilon = x; }));
    t.push_back(number("model.mobility", [](const RunConfig& c) { return c.model.mobility; },
                       [](RunConfig& c, double x) { c.model.mobility = x; }));
    t.push_back(number("model.pfc_epsilon", [](const RunConfig& c) { return c.model.pfc_epsilon; },
                       [](RunConfig& c, double x) { c.model.pfc_epsilon = x; }));

    t.push_back(number("surfactant.mobility_phi", [](const RunConfig& c) { return c.surfactant.mobility_phi; },
                       [](RunConfig& c, double x) { c.surfactant.mobility_phi = x; }));
    t.push_back(number("surfactant.mobility_rho", [](const RunConfig& c) { return c.surfactant.mobility_rho; },
                       [](RunConfig& c, double x) { c.surfactant.mobility_rho = x; }));
    t.push_back(number("surfactant.alpha", [](const RunConfig& c) { return c.surfactant.alpha; },
                       [](RunConfig& c, double x) { c.surfactant.alpha = x; }));
    t.push_back(number("surfactant.beta", [](const RunConfig& c) { return c.surfactant.beta; },
                       [](RunConfig& c, double x) { c.surfactant.beta = x; }));
    t.push_back(number("surfactant.theta", [](const RunConfig& c) { return c.surfactant.theta; },
                       [](RunConfig& c, double x) { c.surfactant.theta = x; }));
    t.push_back(number("surfactant.epsilon", [](const RunConfig& c) { return c.surfactant.epsilon; },
                       [](RunConfig& c, double x) { c.surfactant.epsilon = x; }));
    t.push_back(number("surfactant.eta", [](const RunConfig& c) { return c.surfactant.eta; },
                       [](RunConfig& c, double x) { c.surfactant.eta = x; }));
    t.push_back(number("surfactant.rho_s", [](const RunConfig& c) { return c.surfactant.rho_s; },
                       [](RunConfig& c, double x) { c.surfactant.rho_s = x; }));
    t.push_back(number("surfactant.inner_tol", [](const RunConfig& c) { return c.inner.tol; },
                       [](RunConfig& c, double x) { c.inner.tol = x; }));
    t.push_back({"surfactant.inner_max_iters",
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.inner.max_iters = parse_int(k, v); },
                 [](const RunConfig& c) { return std::to_string(c.inner.max_iters); }});

    t.push_back({"study.ladder", [](RunConfig& c, const std::string& k, const std::string& v) { c.ladder = parse_list(k, v); },
                 [](const RunConfig& c) { return show_list(c.ladder); }});
    t.push_back(number("study.reference_dt", [](const RunConfig& c) { return c.reference_dt; },
                       [](RunConfig& c, double x) { c.reference_dt = x; }));
    t.push_back({"study.energy_dts",
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.energy_dts = parse_list(k, v); },
                 [](const RunConfig& c) { return show_list(c.energy_dts); }});
    return t;
  }();
  return table;
}

const KeyDef* find_key(const std::string& canonical) {
  for (const auto& k : key_table())
    if (k.name == canonical) return &k;
  return nullptr;
}

/// Resolves `section.key` or a bare key naming exactly one setting.
std::string resolve(const std::string& key, const std::string& where) {
  if (key.find('.') != std::string::npos) {
    if (find_key(key)) return key;
    throw ConfigError("unknown key '" + key + "'" + where);
  }
  std::vector<std::string> hits;
  for (const auto& k : key_table())
    if (k.name.substr(k.name.find('.') + 1) == key) hits.push_back(k.name);
  if (hits.empty()) throw ConfigError("unknown key '" + key + "'" + where);
  if (hits.size() > 1) {
    std::string names;
    for (const auto& h : hits) names += (names.empty() ? "" : ", ") + h;
    throw ConfigError("ambiguous key '" + key + "' (" + names + ")" + where);
  }
  return hits.front();
}

struct Entry {
  std::string key;  // canonical
  std::string value;
  std::string where;
};

void apply(RunConfig& cfg, const Entry& e) {
  try {
    find_key(e.key)->set(cfg, e.key, e.value);
  } catch (const ConfigError& err) {
    throw ConfigError(std::string(err.what()) + e.where);
  }
}

RunConfig build(const std::vector<Entry>& file_entries, const std::vector<Override>& overrides) {
  std::vector<Entry> over;
  for (const auto& [k, v] : overrides)
    over.push_back({resolve(trim(k), " (override)"), unquote(trim(v)), " (override)"});

  std::string example;
  for (const auto& e : file_entries)
    if (e.key == "run.example") example = e.value;
  for (const auto& e : over)
    if (e.key == "run.example") example = e.value;

  RunConfig cfg;
  if (!example.empty()) {
    try {
      cfg = example_config(example);
    } catch (const InvalidArgument& err) {
      throw ConfigError(std::string("example: ") + err.what());
    }
  }
  for (const auto& e : file_entries)
    if (e.key != "run.example") apply(cfg, e);
  for (const auto& e : over)
    if (e.key != "run.example") apply(cfg, e);
  cfg.example = example;
  // preset snapshot times past a shortened t_final are dropped; explicit ones are validated
  auto named = [](const Entry& e) { return e.key == "run.snapshot_times"; };
  if (std::none_of(file_entries.begin(), file_entries.end(), named) && std::none_of(over.begin(), over.end(), named))
    std::erase_if(cfg.snapshot_times, [&](double t) { return t > cfg.t_final; });
  try {
    cfg.validate();
  } catch (const InvalidArgument& err) {
    throw ConfigError(std::string("invalid configuration: ") + err.what());
  }
  return cfg;
}

}  // namespace

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty())
    throw ConfigError("override '" + text + "' is not of the form key=value");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

RunConfig parse_config_text(const std::string& text, const std::vector<Override>& overrides,
                            const std::string& source) {
  static const std::vector<std::string> sections = {"run", "grid", "model", "surfactant", "study"};
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = " (" + source + ":" + std::to_string(lineno) + ")";
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(source + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        throw ConfigError(source + ":" + std::to_string(lineno) + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (value.empty() || value.front() != '"') {
      const auto hash = value.find_first_of("#;");
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
    }
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": missing key");
    std::string canonical;
    if (section.empty() || key.find('.') != std::string::npos) {
      canonical = resolve(key, where);
    } else {
      canonical = section + "." + key;
      if (!find_key(canonical)) throw ConfigError("unknown key '" + key + "' in [" + section + "]" + where);
    }
    entries.push_back({canonical, unquote(value), where});
  }
  return build(entries, overrides);
}

RunConfig parse_config(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides, path);
}

RunConfig config_from_overrides(const std::vector<Override>& overrides) { return build({}, overrides); }

std::string to_ini(const RunConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& k : key_table()) {
    const auto dot = k.name.find('.');
    const std::string sec = k.name.substr(0, dot);
    if (sec != section) {
      out << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
      section = sec;
    }
    out << k.name.substr(dot + 1) << " = " << k.get(cfg) << "\n";
  }
  return out.str();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& d : key_table()) k.push_back(d.name);
    return k;
  }();
  return keys;
}

}  // namespace esav
