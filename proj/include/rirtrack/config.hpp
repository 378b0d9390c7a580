#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rirtrack {

struct RoomConfig {
  std::array<double, 3> dimensions{5.0, 4.0, 3.0};
  std::array<double, 6> reflection{0.9, 0.0, 0.85, 0.0, 0.0, 0.8};  // x0,xL,y0,yL,z0,zL
  double speed_of_sound = 343.0;

  bool operator==(const RoomConfig&) const = default;
};

struct TrajectoryConfig {
  std::vector<std::array<double, 3>> waypoints;
  std::vector<double> speeds;     // m/s, one per leg
  double grid_spacing_m = 0.05;   // synthetic measurement-grid spacing

  bool operator==(const TrajectoryConfig&) const = default;
};

struct NoiseConfig {
  std::optional<double> snr_db;  // takes precedence over std_dev when set
  double std_dev = 0.0;

  bool operator==(const NoiseConfig&) const = default;
};

struct SimConfig {
  int max_order = 1;
  int sinc_halfwidth = 40;

  bool operator==(const SimConfig&) const = default;
};

struct DtwConfig {
  int min_diag_len = 8;

  bool operator==(const DtwConfig&) const = default;
};

struct TransitionConfig {
  std::string fill = "identity";  // or "zero"
  int halfwidth = 40;
  double epsilon_samples = 4.0;   // analytic interval padding

  bool operator==(const TransitionConfig&) const = default;
};

struct KalmanConfig {
  double observation_noise = 0.01;
  double process_noise = 1e-5;
  double alpha = 1.0;
  double initial_covariance = 1e-6;

  bool operator==(const KalmanConfig&) const = default;
};

struct EvalConfig {
  int ncc_window = 16;
  int stride = 1;  // evaluate every stride-th location (synthetic mode)

  bool operator==(const EvalConfig&) const = default;
};

struct DatasetConfig {
  std::string path;
  bool resample = false;
  std::vector<int> segment_points;  // subset of grid point ids, in order

  bool operator==(const DatasetConfig&) const = default;
};

struct OutputConfig {
  bool traces = false;     // per-location filter traces as CSV
  bool matrices = false;   // transition matrices as CSV
  bool estimates = false;  // estimated RIRs at evaluation points as WAV

  bool operator==(const OutputConfig&) const = default;
};

/// Complete description of one experiment, loadable from a JSON file.
/// Exactly one of the synthetic room or the dataset path drives a run,
/// selected by mode.
struct ScenarioConfig {
  std::string mode = "synthetic";  // or "dataset"
  uint64_t seed = 0;
  double sample_rate = 16000.0;
  int rir_length = 256;
  std::vector<std::string> variants{"kf_alpha", "kf_transition", "li_transition"};

  RoomConfig room;
  std::array<double, 3> source_position{0.5, 0.7, 1.3};
  TrajectoryConfig trajectory;
  NoiseConfig noise;
  SimConfig sim;
  DtwConfig dtw;
  TransitionConfig transition;
  KalmanConfig kalman;
  EvalConfig evaluation;
  DatasetConfig dataset;
  OutputConfig output;

  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(const std::string& text);
std::string serialize_config(const ScenarioConfig& config);

ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

}  // namespace rirtrack
