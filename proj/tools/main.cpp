#include <CLI11.hpp>
#include <functional>
#include <iostream>
#include <map>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "homodyne/error.hpp"

namespace {

using namespace homodyne;

struct Invocation {
  std::string config_path;
  std::map<std::string, std::string> flags;
  bool verify = false;
  bool inject_fault = false;
};

CLI::App* add_command(CLI::App& app, Invocation& inv, const std::string& name, const std::string& help) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", inv.config_path, "flat key = value configuration file");
  for (const auto& key : cli::config_keys()) {
    if (key == "verify") continue;
    sub->add_option_function<std::string>(
        "--" + key, [&inv, key](const std::string& v) { inv.flags[key] = v; }, "overrides config key '" + key + "'");
  }
  sub->add_flag("--verify", inv.verify, "cross-check closed forms against the optimizer");
  if (name == "verify-oracle") sub->add_flag("--inject-fault", inv.inject_fault)->group("");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-estimation metrology with Gaussian states and homodyne detection"};
  app.require_subcommand(1);
  Invocation inv;

  const std::vector<std::pair<std::string, std::function<int(const cli::RunConfig&)>>> commands = {
      {"sweep-surface", cli::cmd_sweep_surface},
      {"split-scan", cli::cmd_split_scan},
      {"max-cfi", cli::cmd_max_cfi},
      {"states-table", cli::cmd_states_table},
      {"simulate", cli::cmd_simulate},
      {"verify-oracle", cli::cmd_verify_oracle},
  };
  const std::map<std::string, std::string> help = {
      {"sweep-surface", "CFI over transmissivity and LO coefficient xi"},
      {"split-scan", "CFI versus displacement share at fixed photon number"},
      {"max-cfi", "maximal displaced-squeezed CFI versus photon number"},
      {"states-table", "per-class sensitivity, CFI and threshold summary"},
      {"simulate", "Monte-Carlo MLE variance against the Cramer-Rao bound"},
      {"verify-oracle", "cross-check closed forms against the Fock-space oracle"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, fn] : commands) subs[name] = add_command(app, inv, name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto file_values = inv.config_path.empty() ? std::map<std::string, std::string>{}
                                               : cli::read_config_file(inv.config_path);
    auto overrides = inv.flags;
    if (inv.verify) overrides["verify"] = "true";
    cli::RunConfig cfg = cli::build_config(file_values, overrides);
    cfg.inject_fault = inv.inject_fault;
    if (!cfg.format_set && cfg.out.size() > 5 && cfg.out.ends_with(".json")) cfg.format = cli::OutputFormat::Json;

    for (const auto& [name, fn] : commands) {
      if (subs.at(name)->parsed()) return fn(cfg);
    }
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
