#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "gilbert/cli/runner.hpp"

#ifndef GILBERT_VERSION_STRING
#define GILBERT_VERSION_STRING "unknown"
#endif

namespace {

using namespace gilbert::cli;

std::string flag_of(const std::string& key) {
  std::string f = "--" + key;
  for (auto& ch : f) {
    if (ch == '_') ch = '-';
  }
  return f;
}

struct Bound {
  std::string key;
  CLI::Option* option = nullptr;
  std::shared_ptr<std::string> value = std::make_shared<std::string>();
};

void bind(CLI::App* app, std::vector<Bound>& out, const KeySpec& k) {
  Bound b;
  b.key = k.key;
  std::string help = k.help;
  if (!k.default_value.empty()) help += " [" + k.default_value + "]";
  b.option = app->add_option(flag_of(k.key), *b.value, help);
  out.push_back(b);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rectangular Gilbert tessellation: simulation and Monte Carlo experiments"};
  app.set_version_flag("--version", GILBERT_VERSION_STRING);
  app.require_subcommand(1);

  struct Command {
    std::string name;
    CLI::App* app;
    std::vector<Bound> options;
    std::shared_ptr<std::string> config_file = std::make_shared<std::string>();
  };
  std::vector<Command> commands;
  commands.reserve(experiments().size() + 1);
  for (const auto& spec : experiments()) {
    Command c{spec.name, app.add_subcommand(spec.name, spec.help), {}};
    c.app->add_option("--config", *c.config_file, "key=value file; flags override it");
    for (const auto& k : common_keys()) bind(c.app, c.options, k);
    for (const auto& k : spec.keys) bind(c.app, c.options, k);
    commands.push_back(std::move(c));
  }
  {
    Command c{"run", app.add_subcommand("run", "re-run an experiment from a config file or manifest"), {}};
    c.app->add_option("--config,config", *c.config_file, "config file or manifest")->required();
    bind(c.app, c.options, {"threads", "", "worker threads"});
    bind(c.app, c.options, {"output_dir", "", "output directory"});
    commands.push_back(std::move(c));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Success : Usage;
  }

  for (const auto& c : commands) {
    if (!c.app->parsed()) continue;
    Config config;
    try {
      if (c.name != "run") config.set("experiment", c.name);
      if (!c.config_file->empty()) {
        Config file = load_config(*c.config_file);
        if (c.name != "run") file.set("experiment", c.name);
        config.merge(file);
      }
      if (const char* env = std::getenv("GILBERT_OUTPUT_DIR"); env && *env) config.set("output_dir", env);
      for (const auto& b : c.options) {
        if (b.option->count() > 0) config.set(b.key, *b.value);
      }
      if (!config.has("experiment")) throw UsageError("config file does not name an experiment");
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return Usage;
    }
    const RunResult r = run(config, GILBERT_VERSION_STRING, std::cerr);
    if (r.exit_code == Success) std::cout << r.manifest.string() << '\n';
    return r.exit_code;
  }
  return Usage;
}
