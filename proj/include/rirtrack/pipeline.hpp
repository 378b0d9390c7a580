#pragma once

#include "rirtrack/config.hpp"
#include "rirtrack/dataset.hpp"
#include "rirtrack/kalman.hpp"
#include "rirtrack/metrics.hpp"
#include "rirtrack/transition.hpp"

#include <filesystem>

namespace rirtrack {

/// Everything the estimation stage needs in memory, however it was
/// produced (simulated or loaded from disk).
struct PreparedScenario {
  SampleClock clock;
  Trajectory trajectory;
  SourceSignal source;
  MicRecording recording;
  std::vector<GridPoint> grid;       // evaluation points
  std::vector<Rir> grid_rirs;        // measured/ground-truth RIRs at the grid
  std::vector<Rir> endpoint_rirs;    // per segment boundary, S+1 entries
  double noise_std = 0.0;            // actually applied noise level
};

struct VariantReport {
  Variant variant = Variant::KfAlpha;
  std::vector<CurvePoint> curve;
  double correlation = 0.0;
  double median_nm_db = 0.0;
};

struct SegmentReport {
  int index = 0;
  int reflections_found = 0;
  int covered_rows = 0;
  bool overlapping_intervals = false;
};

struct PipelineResult {
  std::vector<VariantReport> variants;
  std::vector<SegmentReport> segments;
  std::vector<std::string> warnings;
  std::filesystem::path out_dir;
};

/// Builds the in-memory scenario: synthetic mode renders the room and
/// trajectory, dataset mode loads and segments a measured bundle.
PreparedScenario prepare_scenario(const ScenarioConfig& config);

/// Full run: prepare, estimate one transition matrix per segment from the
/// endpoint RIRs, filter every configured variant, evaluate, and write the
/// report bundle into out_dir.
PipelineResult run_pipeline(const ScenarioConfig& config,
                            const std::filesystem::path& out_dir);

/// Renders the synthetic scenario and writes it out in the dataset layout
/// (plus a bundle_info.json note), so it can be re-ingested in dataset mode.
void simulate_bundle(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Re-evaluates previously written estimates (requires a run with
/// output.estimates enabled) against a dataset bundle.
PipelineResult evaluate_estimates(const ScenarioConfig& config,
                                  const std::filesystem::path& estimates_dir,
                                  const std::filesystem::path& out_dir);

/// Renders plot-ready CSV/JSON from an existing report directory.
void report_plots(const ScenarioConfig& config, const std::filesystem::path& run_dir,
                  const std::filesystem::path& out_dir);

double median(std::vector<double> values);

}  // namespace rirtrack
