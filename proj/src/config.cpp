#include "kolmo/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace kolmo {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

long long parse_integer(const std::string& text, const std::string& what) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(what + ": expected an integer, got '" + text + "'");
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  const long long v = parse_integer(text, what);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(what + ": out of range");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(what + ": expected an unsigned integer, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

struct Key {
  std::string section;
  std::string name;
  Setter set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto num = [&](std::string sec, std::string name, double RunConfig::*field) {
      const std::string what = sec + "." + name;
      k.push_back({sec, name, [field, what](RunConfig& c, const std::string& v) { c.*field = parse_double(v, what); },
                   [field](const RunConfig& c) { return format_double(c.*field); }});
    };
    auto integer = [&](std::string sec, std::string name, int RunConfig::*field) {
      const std::string what = sec + "." + name;
      k.push_back({sec, name, [field, what](RunConfig& c, const std::string& v) { c.*field = parse_int(v, what); },
                   [field](const RunConfig& c) { return std::to_string(c.*field); }});
    };
    auto custom = [&](std::string sec, std::string name, Setter set, std::function<std::string(const RunConfig&)> get) {
      k.push_back({std::move(sec), std::move(name), std::move(set), std::move(get)});
    };
    auto init_num = [&](std::string name, double InitialSpec::*field) {
      const std::string what = "initial." + name;
      custom("initial", name, [field, what](RunConfig& c, const std::string& v) { c.initial.*field = parse_double(v, what); },
             [field](const RunConfig& c) { return format_double(c.initial.*field); });
    };
    auto integ_num = [&](std::string name, double IntegratorConfig::*field) {
      const std::string what = "integrator." + name;
      custom("integrator", name,
             [field, what](RunConfig& c, const std::string& v) { c.integrator.*field = parse_double(v, what); },
             [field](const RunConfig& c) { return format_double(c.integrator.*field); });
    };
    auto integ_int = [&](std::string name, int IntegratorConfig::*field) {
      const std::string what = "integrator." + name;
      custom("integrator", name,
             [field, what](RunConfig& c, const std::string& v) { c.integrator.*field = parse_int(v, what); },
             [field](const RunConfig& c) { return std::to_string(c.integrator.*field); });
    };

    integer("model", "dim", &RunConfig::dim);
    integer("model", "cutoff", &RunConfig::cutoff);
    num("model", "s", &RunConfig::s);
    num("model", "alpha", &RunConfig::alpha);
    integer("model", "oversample", &RunConfig::oversample);

    custom("initial", "preset", [](RunConfig& c, const std::string& v) { c.initial.preset = preset_from_name(v); },
           [](const RunConfig& c) { return preset_name(c.initial.preset); });
    init_num("omega_min", &InitialSpec::omega_min);
    init_num("omega_max", &InitialSpec::omega_max);
    init_num("b_min", &InitialSpec::b_min);
    init_num("b_spread", &InitialSpec::b_spread);
    init_num("velocity_l2", &InitialSpec::velocity_l2);
    custom("initial", "seed", [](RunConfig& c, const std::string& v) { c.initial.seed = parse_u64(v, "initial.seed"); },
           [](const RunConfig& c) { return std::to_string(c.initial.seed); });
    init_num("decay", &InitialSpec::decay);
    custom("initial", "bandwidth",
           [](RunConfig& c, const std::string& v) { c.initial.bandwidth = parse_int(v, "initial.bandwidth"); },
           [](const RunConfig& c) { return std::to_string(c.initial.bandwidth); });
    custom("initial", "snapshot", [](RunConfig& c, const std::string& v) { c.initial.snapshot = v; },
           [](const RunConfig& c) { return c.initial.snapshot.string(); });

    custom("integrator", "method", [](RunConfig& c, const std::string& v) { c.integrator.method = method_from_name(v); },
           [](const RunConfig& c) { return method_name(c.integrator.method); });
    integ_num("dt", &IntegratorConfig::dt);
    integ_num("abs_tol", &IntegratorConfig::abs_tol);
    integ_num("rel_tol", &IntegratorConfig::rel_tol);
    integ_num("t_end", &IntegratorConfig::t_end);
    integ_num("sample_interval", &IntegratorConfig::sample_interval);
    integ_int("reproject_every", &IntegratorConfig::reproject_every);
    integ_int("monitor_every", &IntegratorConfig::monitor_every);
    integ_num("blowup_factor", &IntegratorConfig::blowup_factor);
    custom("integrator", "max_steps",
           [](RunConfig& c, const std::string& v) { c.integrator.max_steps = parse_u64(v, "integrator.max_steps"); },
           [](const RunConfig& c) { return std::to_string(c.integrator.max_steps); });
    custom("integrator", "extrema_check",
           [](RunConfig& c, const std::string& v) { c.extrema_check = parse_bool(v, "integrator.extrema_check"); },
           [](const RunConfig& c) { return std::string(c.extrema_check ? "true" : "false"); });
    num("integrator", "extrema_tolerance", &RunConfig::extrema_tolerance);

    custom("constants", "c_tilde",
           [](RunConfig& c, const std::string& v) { c.cmodel.c_tilde = parse_double(v, "constants.c_tilde"); },
           [](const RunConfig& c) { return format_double(c.cmodel.c_tilde); });
    custom("constants", "gamma",
           [](RunConfig& c, const std::string& v) { c.cmodel.gamma = parse_double(v, "constants.gamma"); },
           [](const RunConfig& c) { return format_double(c.cmodel.gamma); });
    num("constants", "beta", &RunConfig::beta_override);

    custom("output", "directory", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
           [](const RunConfig& c) { return c.output_dir.string(); });
    custom("output", "snapshots",
           [](RunConfig& c, const std::string& v) { c.write_snapshots = parse_bool(v, "output.snapshots"); },
           [](const RunConfig& c) { return std::string(c.write_snapshots ? "true" : "false"); });
    return k;
  }();
  return table;
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(what + ": expected a number, got '" + text + "'");
  return value;
}

InitialPreset preset_from_name(const std::string& name) {
  if (name == "constant") return InitialPreset::constant;
  if (name == "zero") return InitialPreset::zero;
  if (name == "random") return InitialPreset::random;
  if (name == "snapshot") return InitialPreset::snapshot;
  throw ConfigError("initial.preset: unknown preset '" + name + "' (constant, zero, random, snapshot)");
}

std::string preset_name(InitialPreset preset) {
  switch (preset) {
    case InitialPreset::constant: return "constant";
    case InitialPreset::zero: return "zero";
    case InitialPreset::random: return "random";
    case InitialPreset::snapshot: return "snapshot";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "rk4") return Method::rk4;
  if (name == "rk45" || name == "dopri5") return Method::rk45;
  throw ConfigError("integrator.method: unknown method '" + name + "' (rk4, rk45)");
}

std::string method_name(Method method) { return method == Method::rk4 ? "rk4" : "rk45"; }

void RunConfig::validate() const {
  if (dim < 2) throw ConfigError("model.dim: hypothesis d >= 2 violated (got " + std::to_string(dim) + ")");
  if (dim > 6) throw ConfigError("model.dim: at most 6 supported");
  if (cutoff < 1) throw ConfigError("model.cutoff must be positive");
  if (!(s > 0.5 * dim)) {
    throw ConfigError("model.s: hypothesis s > d/2 violated (s = " + format_double(s) +
                      ", d/2 = " + format_double(0.5 * dim) + ")");
  }
  if (!(alpha > 0.0)) throw ConfigError("model.alpha must be positive");
  if (oversample < 2) throw ConfigError("model.oversample must be at least 2");
  if (initial.preset == InitialPreset::random && initial.bandwidth < 1) {
    throw ConfigError("initial.bandwidth must be at least 1");
  }
  if (initial.preset == InitialPreset::snapshot && initial.snapshot.empty()) {
    throw ConfigError("initial.snapshot: path required for the snapshot preset");
  }
  if (!(cmodel.c_tilde > 0.0)) throw ConfigError("constants.c_tilde must be positive");
  if (beta_override != 0.0 && !(beta_override > 1.0)) throw ConfigError("constants.beta must exceed 1 (0 = derived)");
  if (!(extrema_tolerance >= 0.0)) throw ConfigError("integrator.extrema_tolerance must be nonnegative");
  try {
    integrator.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

double RunConfig::beta() const { return beta_override > 1.0 ? beta_override : beta_exponent(s, dim); }

RunConfig parse_config(const std::string& text) {
  std::map<std::pair<std::string, std::string>, const Key*> lookup;
  for (const auto& k : keys()) lookup[{k.section, k.name}] = &k;

  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto it = lookup.find({section, key});
    if (it == lookup.end()) throw ConfigError(where + "unknown key '" + key + "' in section [" + section + "]");
    try {
      it->second->set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string print_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get(config) << '\n';
  }
  return out.str();
}

}  // namespace kolmo
