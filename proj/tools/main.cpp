#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tweezer/errors.hpp"
#include "tweezer/io/config.hpp"
#include "tweezer/pipeline.hpp"

namespace {

struct Options {
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;
  std::optional<std::string> out;
  bool svg = false;
};

int run(const std::string& command, const Options& opts) {
  using tweezer::Pipeline;
  std::vector<std::string> overrides = opts.overrides;
  if (opts.out) overrides.push_back("output.directory=\"" + *opts.out + "\"");
  if (opts.svg) overrides.emplace_back("output.svg=true");
  // configuration problems surface here, before any computation
  Pipeline p(tweezer::io::load_config(opts.config, overrides), std::cout);

  const std::map<std::string, std::function<void(Pipeline&)>> commands = {
      {"morse", &Pipeline::morse},
      {"kernel", &Pipeline::kernel},
      {"spectrum", &Pipeline::spectrum},
      {"fit", &Pipeline::fit},
      {"optimize", &Pipeline::optimize},
      {"survival", &Pipeline::survival},
      {"adiabaticity", &Pipeline::adiabaticity},
      {"pipeline", &Pipeline::run_all},
  };
  try {
    commands.at(command)(p);
  } catch (const std::exception& e) {
    p.write_manifest(std::string(e.what()));
    throw;
  }
  p.write_manifest();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport of a Morse-trapped impurity: kernel, fit, optimal control and survival"};
  app.require_subcommand(1);
  Options opts;
  std::string chosen;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"morse", "bound-continuum weights a_kappa"},
      {"kernel", "memory kernel samples"},
      {"spectrum", "leakage spectrum and Fourier consistency check"},
      {"fit", "damped-oscillator fit of the kernel"},
      {"optimize", "optimal trap velocity"},
      {"survival", "survival probability along the trajectory"},
      {"adiabaticity", "adiabaticity violation map"},
      {"pipeline", "all stages in order plus manifest"},
  };
  for (const auto& [name, help] : subcommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", opts.overrides, "override a key: dotted.key=value (repeatable)");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_flag("--svg", opts.svg, "also write SVG plots");
    sub->callback([&chosen, n = name] { chosen = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(tweezer::ErrorKind::Config);
  }
  try {
    return run(chosen, opts);
  } catch (const tweezer::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
