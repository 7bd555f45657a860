// bohmtraj: run scenario configs and figure presets, print coherent-state statistics.

#include <iostream>

#include "CLI11.hpp"
#include "bohmtraj/cli.hpp"

using namespace bohmtraj;

namespace {

int report(const RunOutcome& outcome, bool print_summary) {
  if (print_summary) {
    std::cout << summary_text(outcome);
  } else {
    for (const auto& f : outcome.files) std::cout << f.string() << "\n";
  }
  for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real and complex Bohmian trajectories for harmonic and Poschl-Teller coherent states"};
  app.require_subcommand(1);

  std::string config_file, out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run a scenario config file");
  run->add_option("config", config_file, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  run->add_option("--threads", threads, "Worker threads (default: BOHMTRAJ_THREADS or all cores)");

  std::string preset_id;
  bool emit = false, list = false;
  auto* pre = app.add_subcommand("preset", "Run or print a figure preset");
  pre->add_option("id", preset_id, "Preset id, e.g. fig4a");
  pre->add_flag("--emit-config", emit, "Print the preset config instead of running it");
  pre->add_flag("--list", list, "List preset ids");
  pre->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  pre->add_option("--threads", threads, "Worker threads");

  std::string model_type = "ho";
  std::vector<double> J;
  HoModel ho;
  PtModel pt;
  auto* stats = app.add_subcommand("stats", "Coherent-state statistics for one model");
  stats->add_option("--model", model_type, "ho or pt")->check(CLI::IsMember({"ho", "pt"}));
  stats->add_option("--J", J, "One or more J values")->required();
  stats->add_option("--mass", ho.mass, "Mass (both models)");
  stats->add_option("--omega", ho.omega, "HO frequency");
  stats->add_option("--hbar", ho.hbar, "Planck constant (both models)");
  stats->add_option("--a", pt.a, "PT width parameter");
  stats->add_option("--kappa", pt.kappa, "PT coupling kappa");
  stats->add_option("--lambda", pt.lambda, "PT coupling lambda");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunOptions options;
  options.output_dir = out_dir;
  options.threads = threads;
  try {
    if (*run) {
      return report(run_scenario(load_config(config_file), options), false);
    }
    if (*pre) {
      if (list) {
        for (const auto& id : preset_ids()) std::cout << id << "\n";
        return 0;
      }
      if (preset_id.empty()) throw ConfigError("preset: missing id (try --list)");
      const ScenarioConfig config = preset(preset_id);
      if (emit) {
        std::cout << emit_config(config);
        return 0;
      }
      return report(run_scenario(config, options), false);
    }
    ScenarioConfig config;
    config.name = "stats";
    config.variant = Variant::Stats;
    config.state = StateKind::Klauder;
    config.J = J;
    if (model_type == "ho") {
      config.model = ho;
    } else {
      pt.mass = ho.mass;
      pt.hbar = ho.hbar;
      config.model = pt;
    }
    // round-trip through the text form so the usual validation applies
    config = parse_config(emit_config(config));
    options.write_files = false;
    return report(run_scenario(config, options), true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
