#include "tnls/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

namespace tnls {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::integer: return "integer";
    case ValueType::real: return "real";
    case ValueType::rational: return "real or rational p/q";
    case ValueType::string: return "string";
    case ValueType::boolean: return "boolean";
    case ValueType::int_list: return "comma-separated integer list";
  }
  return "?";
}

bool parse_long(const std::string& s, long& out) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end && !s.empty();
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

// Returns an error message, empty on success.
std::string convert(const std::string& text, ValueType type, ConfigValue& v) {
  v.type = type;
  v.text = text;
  switch (type) {
    case ValueType::integer:
      if (!parse_long(text, v.integer)) return "expected an integer, got '" + text + "'";
      v.real = static_cast<double>(v.integer);
      return "";
    case ValueType::real:
      if (!parse_double(text, v.real)) return "expected a real number, got '" + text + "'";
      return "";
    case ValueType::rational:
      try {
        v.beta = Beta::parse(text);
        v.real = v.beta.value();
        v.text = v.beta.str();
      } catch (const Error& e) {
        return e.what();
      }
      return "";
    case ValueType::string:
      if (text.empty()) return "expected a nonempty string";
      return "";
    case ValueType::boolean:
      if (text == "true" || text == "1") v.flag = true;
      else if (text == "false" || text == "0") v.flag = false;
      else return "expected true or false, got '" + text + "'";
      v.text = v.flag ? "true" : "false";
      return "";
    case ValueType::int_list: {
      v.list.clear();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        long x = 0;
        if (!parse_long(trim(item), x)) return "expected integers separated by commas, got '" + text + "'";
        v.list.push_back(static_cast<int>(x));
      }
      if (v.list.empty()) return "expected at least one integer";
      return "";
    }
  }
  return "";
}

using Check = std::function<std::string(const ConfigValue&)>;

Check positive() {
  return [](const ConfigValue& v) { return v.real > 0 ? "" : std::string("must be positive"); };
}
Check nonnegative() {
  return [](const ConfigValue& v) { return v.real >= 0 ? "" : std::string("must be nonnegative"); };
}
Check one_of(std::vector<std::string> options) {
  return [options](const ConfigValue& v) {
    if (std::find(options.begin(), options.end(), v.text) != options.end()) return std::string();
    std::string all;
    for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
    return "must be one of: " + all;
  };
}

std::map<std::string, Check> checks() {
  std::map<std::string, Check> c;
  for (const char* k : {"N", "count", "stride", "samples", "calibration_replicates", "dt", "t_final",
                        "fd_step", "dt_max", "phase_step", "mass_tol", "energy_tol", "residual_tol",
                        "c", "comparable_factor", "s", "epsilon", "sigma", "min_singular"})
    c[k] = positive();
  for (const char* k : {"t", "sample", "seed", "amplitude", "growth_tol", "hs_tol"}) c[k] = nonnegative();
  c["alpha"] = [](const ConfigValue& v) {
    return v.real > 0 && v.real < 1 ? std::string() : std::string("must lie in (0, 1)");
  };
  c["j"] = one_of({"0", "1"});
  c["kind"] = one_of({"original", "renormalized", "v_form", "w_form"});
  c["init"] = one_of({"gaussian", "mu", "file"});
  c["side"] = one_of({"v", "w", "both"});
  c["N_list"] = [](const ConfigValue& v) {
    for (int x : v.list)
      if (x < 1) return std::string("entries must be positive");
    return std::string();
  };
  c["maps"] = [](const ConfigValue& v) {
    std::stringstream ss(v.text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string m = trim(item);
      if (m != "identity" && m != "S" && m != "G" && m != "J" && m != "composition")
        return "unknown map '" + m + "'";
    }
    return std::string();
  };
  return c;
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::resonance_scan: return "resonance-scan";
    case Command::normal_form: return "normal-form";
    case Command::measure: return "measure";
    case Command::smoothing: return "smoothing";
    case Command::ramer: return "ramer";
    case Command::verify_all: return "verify-all";
  }
  return "?";
}

Command command_from_name(const std::string& s) {
  for (Command c : {Command::simulate, Command::resonance_scan, Command::normal_form, Command::measure,
                    Command::smoothing, Command::ramer, Command::verify_all})
    if (s == command_name(c)) return c;
  throw ValidationError("unknown command '" + s + "'");
}

ConfigError::ConfigError(std::vector<std::string> errs)
    : ValidationError([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errs) msg += "\n  " + e;
        return msg;
      }()),
      errors(std::move(errs)) {}

std::vector<KeyInfo> command_schema(Command c) {
  using T = ValueType;
  std::vector<KeyInfo> k = {
      {"command", T::string, "", "subcommand to run"},
      {"output", T::string, "out", "output directory"},
      {"seed", T::integer, "1", "random seed"},
      {"beta", T::rational, "2.1", "dispersion coefficient"},
      {"s", T::real, "0.8", "measure regularity"},
      {"sigma", T::real, "0.29", "working regularity"},
      {"epsilon", T::real, "0.05", "smoothing gain margin"},
  };
  auto add = [&](std::initializer_list<KeyInfo> more) { k.insert(k.end(), more); };
  switch (c) {
    case Command::simulate:
      add({{"N", T::integer, "16", "truncation"},
           {"kind", T::string, "original", "original, renormalized, v_form or w_form"},
           {"dt", T::real, "0.001", "time step"},
           {"t_final", T::real, "1.0", "integration time"},
           {"stride", T::integer, "10", "steps between recorded snapshots"},
           {"init", T::string, "gaussian", "gaussian (smooth random state), mu (measure sample) or file"},
           {"init_file", T::string, "none", "snapshot path when init = file"},
           {"sample", T::integer, "0", "sample index for random initial states"},
           {"amplitude", T::real, "1", "L2 norm of a random initial state; 0 keeps the sample"},
           {"mass_tol", T::real, "1e-8", "allowed mass drift"},
           {"energy_tol", T::real, "1e-6", "allowed relative Hamiltonian drift"}});
      break;
    case Command::resonance_scan:
      add({{"N", T::integer, "32", "frequency bound"},
           {"c", T::real, "0.125", "phase lower-bound constant"},
           {"comparable_factor", T::real, "4", "comparability factor"},
           {"write_tuples", T::boolean, "true", "write one CSV row per tuple"}});
      break;
    case Command::normal_form:
      add({{"N", T::integer, "8", "truncation"},
           {"t", T::real, "0.1", "final time"},
           {"dt", T::real, "1e-4", "time step and snapshot spacing"},
           {"side", T::string, "both", "v, w or both"},
           {"sample", T::integer, "0", "sample index"},
           {"amplitude", T::real, "2", "L2 norm of the initial state; 0 keeps the sample"},
           {"residual_tol", T::real, "1e-6", "allowed residual"}});
      break;
    case Command::measure:
      add({{"N", T::integer, "32", "truncation"},
           {"count", T::integer, "10000", "ensemble size"},
           {"alpha", T::real, "0.01", "family-wise level"},
           {"t", T::real, "0.5", "map parameter"},
           {"maps", T::string, "S,G,J,composition", "maps to test"},
           {"calibration_replicates", T::integer, "20", "identity-map replicate pairs"}});
      break;
    case Command::smoothing:
      add({{"j", T::integer, "1", "0 (v side) or 1 (w side)"},
           {"t", T::real, "0.5", "final time"},
           {"N_list", T::int_list, "16,32,64,128", "truncations"},
           {"count", T::integer, "200", "samples per truncation"},
           {"dt_max", T::real, "1e-3", "largest time step"},
           {"phase_step", T::real, "0.3", "largest phase advance per step"},
           {"growth_tol", T::real, "0.2", "allowed relative growth of the 0.95 quantile"}});
      break;
    case Command::ramer:
      add({{"j", T::integer, "1", "0 (v side) or 1 (w side)"},
           {"t", T::real, "0.2", "final time"},
           {"N_list", T::int_list, "8,16,32", "truncations"},
           {"count", T::integer, "20", "samples per truncation"},
           {"fd_step", T::real, "1e-5", "finite-difference step"},
           {"dt_max", T::real, "1e-3", "largest time step"},
           {"phase_step", T::real, "0.3", "largest phase advance per step"},
           {"hs_tol", T::real, "0.2", "allowed spread of the mean weighted HS norm"},
           {"min_singular", T::real, "0.5", "required lower bound on singular values"}});
      break;
    case Command::verify_all:
      add({{"N", T::integer, "16", "truncation for the dynamic checks"},
           {"samples", T::integer, "3", "random states per check"}});
      break;
  }
  return k;
}

long RunConfig::integer(const std::string& key) const { return values.at(key).integer; }
double RunConfig::real(const std::string& key) const { return values.at(key).real; }
const Beta& RunConfig::beta(const std::string& key) const { return values.at(key).beta; }
const std::string& RunConfig::string(const std::string& key) const { return values.at(key).text; }
bool RunConfig::flag(const std::string& key) const { return values.at(key).flag; }
const std::vector<int>& RunConfig::list(const std::string& key) const { return values.at(key).list; }

ModelParams RunConfig::model() const {
  ModelParams p;
  p.beta = beta();
  p.s = real("s");
  p.sigma = real("sigma");
  p.epsilon = real("epsilon");
  return p;
}

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  struct Entry {
    std::string value;
    std::string where;
  };
  std::vector<std::string> errors;
  std::map<std::string, Entry> raw;
  std::map<std::string, int> first_line;

  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(number) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(number) + ": missing key");
      continue;
    }
    if (auto it = first_line.find(key); it != first_line.end()) {
      errors.push_back("line " + std::to_string(number) + ": duplicate key '" + key +
                       "' (first set on line " + std::to_string(it->second) + ")");
      continue;
    }
    first_line[key] = number;
    raw[key] = {value, "line " + std::to_string(number)};
  }
  for (const auto& [key, value] : overrides) raw[trim(key)] = {trim(value), "override"};

  RunConfig cfg;
  auto cmd = raw.find("command");
  if (cmd == raw.end()) {
    errors.push_back("missing required key 'command'");
    throw ConfigError(errors);
  }
  try {
    cfg.command = command_from_name(cmd->second.value);
  } catch (const ValidationError& e) {
    errors.push_back(cmd->second.where + ": " + e.what());
    throw ConfigError(errors);
  }

  const std::vector<KeyInfo> schema = command_schema(cfg.command);
  const auto rules = checks();
  for (const auto& [key, entry] : raw) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const KeyInfo& k) { return k.name == key; });
    if (!known)
      errors.push_back(entry.where + ": unknown key '" + key + "' for command " +
                       command_name(cfg.command));
  }
  for (const KeyInfo& info : schema) {
    auto it = raw.find(info.name);
    std::string where = "default";
    std::string value = info.default_text;
    if (it != raw.end()) {
      where = it->second.where;
      value = it->second.value;
    } else if (info.default_text.empty()) {
      errors.push_back("missing required key '" + info.name + "'");
      continue;
    }
    ConfigValue v;
    std::string err = convert(value, info.type, v);
    if (err.empty()) {
      if (auto r = rules.find(info.name); r != rules.end()) err = r->second(v);
    }
    if (!err.empty()) {
      errors.push_back(where + ": " + info.name + " " + err + " (" + type_name(info.type) + ")");
      continue;
    }
    cfg.values[info.name] = v;
  }
  if (!errors.empty()) throw ConfigError(errors);

  cfg.output_dir = cfg.string("output");
  cfg.seed = static_cast<std::uint64_t>(cfg.integer("seed"));
  if (cfg.command == Command::simulate && cfg.string("init") == "file" && cfg.string("init_file") == "none")
    errors.push_back("init = file requires init_file");
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

}  // namespace tnls
