#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rirtrack {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Point3 = Eigen::Vector3d;

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid setup: bad parameters, mismatched dimensions, malformed config.
class ConfigError : public Error {
  using Error::Error;
};

/// Problems with input data: missing files, bad rates, inconsistent tables.
class DataError : public Error {
  using Error::Error;
};

/// Numerical breakdown (divergence, undefined metric).
class NumericError : public Error {
  using Error::Error;
};

/// Geometry violations (source outside room, trajectory leaving the room).
class GeometryError : public ConfigError {
  using ConfigError::ConfigError;
};

/// Out-of-range sample or location index.
class IndexError : public ConfigError {
  using ConfigError::ConfigError;
};

/// Sampling rate and the derived sampling period.
struct SampleClock {
  double sample_rate = 0.0;

  SampleClock() = default;
  explicit SampleClock(double rate) : sample_rate(rate) {
    if (!(rate > 0.0)) throw ConfigError("sample rate must be positive");
  }

  double period() const { return 1.0 / sample_rate; }

  bool operator==(const SampleClock&) const = default;
};

/// Early room impulse response at one microphone location: a fixed-length
/// tap vector on a common clock.
struct Rir {
  Vec taps;
  SampleClock clock;

  Rir() = default;
  Rir(Vec t, SampleClock c) : taps(std::move(t)), clock(c) {
    if (taps.size() < 1) throw ConfigError("RIR must have at least one tap");
  }

  int length() const { return static_cast<int>(taps.size()); }
};

/// Known source (excitation) signal x(k).
struct SourceSignal {
  std::vector<double> samples;
  SampleClock clock;
};

/// Signal captured by the moving microphone, one sample per location index.
struct MicRecording {
  std::vector<double> samples;
  SampleClock clock;
};

/// One approximately linear piece of the trajectory with constant speed.
/// Location indices run from l_start to l_end inclusive; the first location
/// of a segment coincides with the last location of the previous one.
struct Segment {
  int index = 0;        // 1-based segment number
  int l_start = 0;      // first location index
  int l_end = 0;        // last location index
  double velocity = 0;  // m/s
  double spacing = 0;   // meters between consecutive locations
  double length_m = 0;  // total segment length in meters
  int n_locations = 0;  // locations in the segment, boundaries included

  void validate(double period) const;
};

/// Spatial sampling of the microphone path: one 3-D position per location
/// index plus the segment structure that tiles the index range.
struct Trajectory {
  std::vector<Point3> positions;
  std::optional<std::vector<double>> timestamps;  // seconds per location
  std::vector<Segment> segments;

  int total_locations() const { return static_cast<int>(positions.size()); }

  void validate(const SampleClock& clock) const;

  /// Builds a trajectory from straight legs between consecutive waypoints,
  /// one segment per leg. Each leg is sampled at spacing speed/sample_rate,
  /// rounded to an integer number of steps (the recorded per-segment speed
  /// is adjusted accordingly so that spacing == velocity * period holds).
  static Trajectory from_waypoints(std::span<const Point3> waypoints,
                                   std::span<const double> speeds,
                                   const SampleClock& clock);
};

}  // namespace rirtrack
