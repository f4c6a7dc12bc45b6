#pragma once

#include "tnls/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tnls {

enum class Command { simulate, resonance_scan, normal_form, measure, smoothing, ramer, verify_all };

const char* command_name(Command c);
Command command_from_name(const std::string& s);

enum class ValueType { integer, real, rational, string, boolean, int_list };

struct ConfigValue {
  ValueType type = ValueType::string;
  std::string text;  // canonical textual form
  long integer = 0;
  double real = 0.0;
  Beta beta;
  bool flag = false;
  std::vector<int> list;
};

// Aggregated configuration errors, one message per problem.
struct ConfigError : ValidationError {
  explicit ConfigError(std::vector<std::string> errors);
  std::vector<std::string> errors;
};

struct RunConfig {
  Command command = Command::simulate;
  std::map<std::string, ConfigValue> values;  // every schema key, defaults filled in
  std::string output_dir;
  std::uint64_t seed = 1;

  long integer(const std::string& key) const;
  double real(const std::string& key) const;
  const Beta& beta(const std::string& key = "beta") const;
  const std::string& string(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::vector<int>& list(const std::string& key) const;
  ModelParams model() const;
};

struct KeyInfo {
  std::string name;
  ValueType type;
  std::string default_text;  // empty: required
  std::string help;
};

// Keys accepted by a command, including the common ones.
std::vector<KeyInfo> command_schema(Command c);

// Line-oriented `key = value` text with `#` comments. `overrides` take precedence over the
// text and may supply the command. All problems are collected into one ConfigError.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

}  // namespace tnls
