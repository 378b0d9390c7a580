#include "rirtrack/config.hpp"
#include "rirtrack/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> variants;
  uint64_t seed = 0;
  bool seed_set = false;
  bool resample = false;
};

rirtrack::ScenarioConfig load_effective_config(const CommonArgs& args) {
  rirtrack::ScenarioConfig cfg = rirtrack::load_config(args.config_path);
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.variants.empty()) cfg.variants = args.variants;
  if (args.resample) cfg.dataset.resample = true;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_variants = true) {
  cmd->add_option("--config", args.config_path, "Scenario configuration file (JSON)")
      ->required();
  cmd->add_option("--out-dir", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Override the configured seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  if (with_variants)
    cmd->add_option("--variant", args.variants,
                    "Variant to run (kf_alpha, kf_transition, li_transition); repeatable");
  cmd->add_flag("--resample", args.resample, "Allow resampling dataset audio");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Early-RIR estimation along moving-microphone trajectories"};
  app.require_subcommand(1);

  CommonArgs sim_args, est_args, eval_args, report_args;
  std::string eval_estimates_dir;
  std::string report_run_dir;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Render the synthetic scenario and write a dataset bundle");
  add_common(simulate, sim_args, /*with_variants=*/false);

  CLI::App* estimate = app.add_subcommand(
      "estimate", "Run the full pipeline: estimate transitions, filter, evaluate");
  add_common(estimate, est_args);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Recompute metrics from previously written estimates");
  add_common(evaluate, eval_args);
  evaluate
      ->add_option("--estimates", eval_estimates_dir,
                   "Directory with per-variant estimates (an 'estimates' dir of a run)")
      ->required();

  CLI::App* report = app.add_subcommand(
      "report", "Render plot-ready CSV/JSON from an existing run directory");
  add_common(report, report_args);
  report->add_option("--run-dir", report_run_dir, "Directory written by 'estimate'")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) {
      rirtrack::simulate_bundle(load_effective_config(sim_args), sim_args.out_dir);
      std::printf("bundle written to %s\n", sim_args.out_dir.c_str());
    } else if (estimate->parsed()) {
      const rirtrack::PipelineResult result =
          rirtrack::run_pipeline(load_effective_config(est_args), est_args.out_dir);
      for (const rirtrack::VariantReport& v : result.variants)
        std::printf("%-10s correlation=%.6f median_nm_db=%.2f\n",
                    rirtrack::variant_key(v.variant).c_str(), v.correlation,
                    v.median_nm_db);
      for (const std::string& w : result.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("reports written to %s\n", est_args.out_dir.c_str());
    } else if (evaluate->parsed()) {
      const rirtrack::PipelineResult result = rirtrack::evaluate_estimates(
          load_effective_config(eval_args), eval_estimates_dir, eval_args.out_dir);
      for (const rirtrack::VariantReport& v : result.variants)
        std::printf("%-10s correlation=%.6f median_nm_db=%.2f\n",
                    rirtrack::variant_key(v.variant).c_str(), v.correlation,
                    v.median_nm_db);
    } else if (report->parsed()) {
      rirtrack::report_plots(load_effective_config(report_args), report_run_dir,
                             report_args.out_dir);
      std::printf("plot data written to %s\n", report_args.out_dir.c_str());
    }
  } catch (const rirtrack::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const rirtrack::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const rirtrack::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
