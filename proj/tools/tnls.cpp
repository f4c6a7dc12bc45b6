#include "tnls/config.hpp"
#include "tnls/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw tnls::IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Galerkin lab for cubic NLS with third-order dispersion on the circle"};
  app.set_version_flag("--version", tnls::kVersion);
  std::string config_path, output_dir;
  long seed = -1;
  std::vector<std::string> overrides;
  bool list_keys = false;

  const std::vector<std::string> names = {"simulate", "resonance-scan", "normal-form", "measure",
                                          "smoothing", "ramer", "verify-all"};
  std::vector<CLI::App*> subs;
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("-c,--config", config_path, "key = value config file");
    sub->add_option("-o,--output", output_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_flag("--keys", list_keys, "list accepted keys and defaults, then exit");
    sub->add_option("overrides", overrides, "key=value overrides");
    subs.push_back(sub);
  }
  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  std::string command;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) command = names[i];

  if (list_keys) {
    for (const auto& k : tnls::command_schema(tnls::command_from_name(command)))
      std::cout << k.name << " = " << (k.default_text.empty() ? "(required)" : k.default_text) << "  # "
                << k.help << '\n';
    return tnls::exit_ok;
  }

  tnls::RunConfig cfg;
  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos)
        throw tnls::ConfigError({"override '" + o + "' is not of the form key=value"});
      kv.emplace_back(o.substr(0, eq), o.substr(eq + 1));
    }
    if (text.find("command") == std::string::npos) kv.emplace_back("command", command);
    if (!output_dir.empty()) kv.emplace_back("output", output_dir);
    if (seed >= 0) kv.emplace_back("seed", std::to_string(seed));
    cfg = tnls::parse_config(text, kv);
    if (tnls::command_name(cfg.command) != command)
      throw tnls::ConfigError({std::string("config file is for command '") + tnls::command_name(cfg.command) +
                               "' but '" + command + "' was requested"});
  } catch (const std::exception& e) {
    const int code = tnls::exit_code_for(e);
    std::cerr << tnls::error_json(command, e, code);
    return code;
  }
  return tnls::run_reported(cfg, std::cerr, std::cerr);
}
