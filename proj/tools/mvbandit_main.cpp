// Command-line front end: run experiments from a JSON config or a named
// preset, render aggregate CSVs as SVG, and validate configs.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mvbandit/errors.hpp"
#include "mvbandit/experiment.hpp"
#include "mvbandit/plot.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Risk-aware linear bandit simulator for smart order routing"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir;
  int seeds_override = 0, jobs_override = 0;
  long long horizon_override = 0;
  bool dump_design = false, dump_traj = false;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSVs");
  auto* cfg_opt = run->add_option("--config", config_path,
                                  "Path to a run-config JSON file");
  auto* preset_opt =
      run->add_option("--preset", preset_name, "Preset: fig1..fig4");
  cfg_opt->excludes(preset_opt);
  run->add_option("--seeds", seeds_override,
                  "Override the number of derived seeds");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs_override, "Worker threads");
  run->add_option("-T,--horizon", horizon_override, "Override the horizon T");
  run->add_flag("--dump-design", dump_design,
                "Also write the G-optimal design as design.json");
  run->add_flag("--dump-traj", dump_traj,
                "Also write per-run trajectory CSVs and sidecars");

  std::string plot_in, plot_out, plot_title;
  auto* plot = app.add_subcommand("plot", "Render an aggregate CSV as SVG");
  plot->add_option("--in", plot_in, "Aggregate CSV path")->required();
  plot->add_option("--out", plot_out, "Output SVG path")->required();
  plot->add_option("--title", plot_title, "Plot title");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a run-config JSON");
  validate->add_option("--config", validate_path, "Path to the config")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      mvbandit::RunConfig cfg;
      if (!preset_name.empty()) {
        cfg = mvbandit::preset(preset_name);
      } else if (!config_path.empty()) {
        cfg = mvbandit::load_run_config(config_path);
      } else {
        std::cerr << "run needs --config or --preset\n";
        return 1;
      }
      if (seeds_override > 0) {
        if (!cfg.seeds.explicit_seeds.empty())
          throw mvbandit::ConfigError(
              "--seeds cannot override an explicit seed list");
        cfg.seeds.count = seeds_override;
      }
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      if (jobs_override > 0) cfg.jobs = jobs_override;
      if (horizon_override > 0) cfg.T = horizon_override;
      if (dump_design) cfg.dump_design = true;
      if (dump_traj) cfg.dump_trajectories = true;

      auto start = std::chrono::steady_clock::now();
      mvbandit::ExperimentResult result = mvbandit::run_experiment(cfg);
      double secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      std::cout << "wrote " << result.per_seed_path << "\n"
                << "wrote " << result.aggregate_path << "\n"
                << "wrote " << result.metadata_path << "\n";
      std::printf("%zu policies x %zu seeds in %.1fs\n",
                  result.reports.size(),
                  result.reports.empty() ? 0 : result.reports[0].seeds.size(),
                  secs);
    } else if (plot->parsed()) {
      mvbandit::plot_regret_csv(plot_in, plot_out, plot_title);
      std::cout << "wrote " << plot_out << "\n";
    } else if (validate->parsed()) {
      mvbandit::RunConfig cfg = mvbandit::load_run_config(validate_path);
      mvbandit::validate_run_config(cfg);
      mvbandit::MVInstance inst = mvbandit::build_instance(cfg);
      std::cout << "ok: scenario " << cfg.scenario << " (d="
                << inst.actions.dim() << ", K=" << inst.actions.size()
                << "), T=" << cfg.T << ", "
                << cfg.policies.size() << " policies, "
                << (cfg.seeds.explicit_seeds.empty()
                        ? cfg.seeds.count
                        : static_cast<int>(cfg.seeds.explicit_seeds.size()))
                << " seeds\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
