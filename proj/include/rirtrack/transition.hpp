#pragma once

#include "rirtrack/dtw.hpp"
#include "rirtrack/ism.hpp"
#include "rirtrack/types.hpp"

namespace rirtrack {

/// What to put in rows whose tap is not covered by any reflection interval:
/// identity rows keep the tap unchanged (the robust default for estimated
/// matrices), zero rows follow the analytic model literally.
enum class FillMode { Identity, ZeroRows };

/// Two reflections whose TOA intervals overlap on the tap range
/// [tap_lo, tap_hi]; the transition model assumes disjoint intervals.
struct OverlapWarning {
  int first = 0;
  int second = 0;
  int tap_lo = 0;
  int tap_hi = 0;
};

/// For every tap index n, the reflections whose TOA interval covers n.
/// Interval bounds in seconds are rounded outward to the sample grid.
struct ReflectionCoverage {
  int n_taps = 0;
  std::vector<std::vector<int>> covering;  // reflection indices per tap
  std::vector<OverlapWarning> warnings;
};

ReflectionCoverage reflection_sets(const ReflectionMapEstimate& map, int n_taps,
                                   const SampleClock& clock);

/// Half-bandwidth of the truncated sinc rows of a transition matrix.
inline constexpr int kTransitionHalfwidth = 40;

/// Per-segment transition matrix: covered rows carry truncated-sinc
/// fractional-shift kernels, the rest identity (or zero) fill. Stored
/// sparse; covered rows are kept separately so covariance propagation can
/// run on the identity-plus-correction form.
struct TransitionMatrix {
  enum class Source { Analytic, DtwEstimated };

  SpMat matrix;
  int n_taps = 0;
  int segment_index = 0;
  Source source = Source::DtwEstimated;
  FillMode fill = FillMode::Identity;
  std::vector<int> covered_rows;

  /// A * h.
  Vec apply(const Vec& h) const;

  /// A * P * A^T for symmetric P, exploiting that A differs from the
  /// identity only on a subset of rows when the fill mode is Identity.
  Mat propagate_covariance(const Mat& p) const;

  Mat dense() const { return Mat(matrix); }
};

/// Builds the transition matrix from per-reflection TOA steps (seconds per
/// location) and the coverage sets. Every reflection referenced by the
/// coverage must have a step. Row n, column n' gets
/// sum over covering reflections of sinc(n - step/T - n').
TransitionMatrix build_transition(const ReflectionCoverage& coverage,
                                  std::span<const double> step_seconds, int n_taps,
                                  const SampleClock& clock,
                                  FillMode fill = FillMode::Identity,
                                  int halfwidth = kTransitionHalfwidth);

/// Ground-truth transition matrix from exact image-source geometry: TOA
/// steps from the endpoint TOAs of each image, intervals from the TOAs at
/// the second and last segment locations padded by epsilon. Simulation
/// only; the estimation pipeline uses the warp-based path instead.
TransitionMatrix analytic_transition(const ImageSourceSet& images, const Segment& segment,
                                     std::span<const Point3> positions, int n_taps,
                                     const SampleClock& clock, double epsilon_seconds,
                                     FillMode fill = FillMode::Identity,
                                     int halfwidth = kTransitionHalfwidth);

/// Same, but also exposing the analytic reflection map (for tests and
/// debug dumps).
ReflectionMapEstimate analytic_reflection_map(const ImageSourceSet& images,
                                              const Segment& segment,
                                              std::span<const Point3> positions,
                                              const SampleClock& clock,
                                              double epsilon_seconds);

/// The location-variant transition map l -> A(l): piecewise constant over
/// segments, with the shared boundary location belonging to the earlier
/// segment (segment s applies for l in (l_start, l_end]).
class PiecewiseTransition {
 public:
  PiecewiseTransition() = default;
  PiecewiseTransition(std::vector<Segment> segments, std::vector<TransitionMatrix> matrices,
                      int total_locations);

  /// Transition matrix for the step l-1 -> l. Valid for l in
  /// [1, total_locations - 1]; anything else is a ConfigError.
  const TransitionMatrix& at(int location) const;

  int total_locations() const { return total_locations_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<TransitionMatrix>& matrices() const { return matrices_; }

 private:
  std::vector<Segment> segments_;
  std::vector<TransitionMatrix> matrices_;
  int total_locations_ = 0;
};

PiecewiseTransition assemble_piecewise(const Trajectory& traj,
                                       std::vector<TransitionMatrix> matrices);

}  // namespace rirtrack
