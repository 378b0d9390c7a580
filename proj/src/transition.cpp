#include "rirtrack/transition.hpp"

#include "rirtrack/signal_ops.hpp"

#include <algorithm>
#include <cmath>

namespace rirtrack {

ReflectionCoverage reflection_sets(const ReflectionMapEstimate& map, int n_taps,
                                   const SampleClock& clock) {
  if (n_taps < 1) throw ConfigError("tap count must be >= 1");

  ReflectionCoverage cov;
  cov.n_taps = n_taps;
  cov.covering.assign(n_taps, {});

  const double rate = clock.sample_rate;
  const int count = static_cast<int>(map.reflections.size());
  std::vector<std::pair<int, int>> tap_ranges(count);

  for (int r = 0; r < count; ++r) {
    const ToaInterval& iv = map.reflections[r].interval;
    // Round the bounds outward; the 1e-9 guard keeps exact grid values from
    // drifting a sample due to floating point noise.
    int lo = static_cast<int>(std::floor(iv.lo * rate + 1e-9));
    int hi = static_cast<int>(std::ceil(iv.hi * rate - 1e-9));
    lo = std::max(lo, 0);
    hi = std::min(hi, n_taps - 1);
    tap_ranges[r] = {lo, hi};
    for (int n = lo; n <= hi; ++n) cov.covering[n].push_back(r);
  }

  for (int a = 0; a < count; ++a)
    for (int b = a + 1; b < count; ++b) {
      const int lo = std::max(tap_ranges[a].first, tap_ranges[b].first);
      const int hi = std::min(tap_ranges[a].second, tap_ranges[b].second);
      if (lo <= hi && tap_ranges[a].first <= tap_ranges[a].second &&
          tap_ranges[b].first <= tap_ranges[b].second)
        cov.warnings.push_back({a, b, lo, hi});
    }
  return cov;
}

Vec TransitionMatrix::apply(const Vec& h) const {
  if (h.size() != n_taps) throw ConfigError("transition dimension mismatch");
  return matrix * h;
}

Mat TransitionMatrix::propagate_covariance(const Mat& p) const {
  if (p.rows() != n_taps || p.cols() != n_taps)
    throw ConfigError("covariance dimension mismatch");

  if (fill == FillMode::ZeroRows) {
    // Zero fill makes almost every row differ from the identity; no
    // structure to exploit, so go dense.
    const Mat a = dense();
    return a * p * a.transpose();
  }
  if (covered_rows.empty()) return p;

  // A = I + B with B nonzero only on the covered rows. For symmetric P,
  // A P A^T = P + B P + (B P)^T + B P B^T; with m covered rows this costs
  // O(m N^2) instead of the dense N^3.
  const int m = static_cast<int>(covered_rows.size());
  Mat b = Mat::Zero(m, n_taps);
  for (int i = 0; i < m; ++i) {
    const int r = covered_rows[i];
    for (SpMat::InnerIterator it(matrix, r); it; ++it) b(i, it.col()) = it.value();
    b(i, r) -= 1.0;
  }

  Mat bp(m, n_taps);
  bp.noalias() = b * p;
  Mat bpbt(m, m);
  bpbt.noalias() = bp * b.transpose();

  Mat out = p;
  out(covered_rows, Eigen::all) += bp;
  out(Eigen::all, covered_rows) += bp.transpose();
  out(covered_rows, covered_rows) += bpbt;
  return out;
}

TransitionMatrix build_transition(const ReflectionCoverage& coverage,
                                  std::span<const double> step_seconds, int n_taps,
                                  const SampleClock& clock, FillMode fill, int halfwidth) {
  if (coverage.n_taps != n_taps) throw ConfigError("coverage size mismatch");
  if (halfwidth < 1) throw ConfigError("transition halfwidth must be >= 1");

  const double period = clock.period();
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> covered;

  for (int n = 0; n < n_taps; ++n) {
    const std::vector<int>& refl = coverage.covering[n];
    if (refl.empty()) {
      if (fill == FillMode::Identity) triplets.emplace_back(n, n, 1.0);
      continue;
    }
    covered.push_back(n);
    for (int r : refl) {
      if (r < 0 || r >= static_cast<int>(step_seconds.size()))
        throw ConfigError("coverage references a reflection without a TOA step");
      const double shift = step_seconds[r] / period;  // samples per location
      const int lo = std::max(0, static_cast<int>(std::ceil(n - shift - halfwidth)));
      const int hi = std::min(n_taps - 1, static_cast<int>(std::floor(n - shift + halfwidth)));
      for (int col = lo; col <= hi; ++col) {
        const double value = sinc(n - shift - col);
        if (value != 0.0) triplets.emplace_back(n, col, value);
      }
    }
  }

  TransitionMatrix out;
  out.n_taps = n_taps;
  out.fill = fill;
  out.covered_rows = std::move(covered);
  out.matrix.resize(n_taps, n_taps);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

ReflectionMapEstimate analytic_reflection_map(const ImageSourceSet& images,
                                              const Segment& segment,
                                              std::span<const Point3> positions,
                                              const SampleClock& clock,
                                              double epsilon_seconds) {
  if (segment.l_end >= static_cast<int>(positions.size()))
    throw ConfigError("segment range exceeds the position table");
  if (segment.n_locations < 2) throw ConfigError("segment needs at least two locations");
  if (epsilon_seconds < 0) throw ConfigError("epsilon must be non-negative");

  const Point3& first = positions[segment.l_start];
  const Point3& second = positions[segment.l_start + 1];
  const Point3& last = positions[segment.l_end];

  ReflectionMapEstimate map;
  map.provenance = MapProvenance::Analytic;
  map.reflections.reserve(images.sources.size());

  for (int r = 0; r < images.count(); ++r) {
    ReflectionEstimate est;
    const double toa_first = images.toa(r, first);
    const double toa_second = images.toa(r, second);
    const double toa_last = images.toa(r, last);
    est.step_seconds = (toa_last - toa_first) / (segment.n_locations - 1);
    // The occupied interval runs from the second location of the segment
    // (the first one the transition produces) to the last one.
    est.interval.lo = std::min(toa_second, toa_last) - epsilon_seconds;
    est.interval.hi = std::max(toa_second, toa_last) + epsilon_seconds;
    map.reflections.push_back(est);
  }

  std::sort(map.reflections.begin(), map.reflections.end(),
            [](const ReflectionEstimate& a, const ReflectionEstimate& b) {
              return a.interval.lo < b.interval.lo;
            });
  for (size_t a = 0; a < map.reflections.size(); ++a)
    for (size_t b = a + 1; b < map.reflections.size(); ++b)
      if (map.reflections[a].interval.overlaps(map.reflections[b].interval))
        map.overlapping.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return map;
}

TransitionMatrix analytic_transition(const ImageSourceSet& images, const Segment& segment,
                                     std::span<const Point3> positions, int n_taps,
                                     const SampleClock& clock, double epsilon_seconds,
                                     FillMode fill, int halfwidth) {
  const ReflectionMapEstimate map =
      analytic_reflection_map(images, segment, positions, clock, epsilon_seconds);
  const ReflectionCoverage cov = reflection_sets(map, n_taps, clock);
  std::vector<double> steps;
  steps.reserve(map.reflections.size());
  for (const ReflectionEstimate& est : map.reflections) steps.push_back(est.step_seconds);

  TransitionMatrix out = build_transition(cov, steps, n_taps, clock, fill, halfwidth);
  out.segment_index = segment.index;
  out.source = TransitionMatrix::Source::Analytic;
  return out;
}

PiecewiseTransition::PiecewiseTransition(std::vector<Segment> segments,
                                         std::vector<TransitionMatrix> matrices,
                                         int total_locations)
    : segments_(std::move(segments)),
      matrices_(std::move(matrices)),
      total_locations_(total_locations) {
  if (segments_.size() != matrices_.size())
    throw ConfigError("need exactly one transition matrix per segment");
}

const TransitionMatrix& PiecewiseTransition::at(int location) const {
  if (location < 1 || location >= total_locations_)
    throw ConfigError("transition lookup outside [1, total_locations - 1]");
  // The shared boundary location belongs to the earlier segment, so
  // segment s serves l in (l_start, l_end].
  for (size_t s = 0; s < segments_.size(); ++s)
    if (location > segments_[s].l_start && location <= segments_[s].l_end)
      return matrices_[s];
  throw ConfigError("transition coverage gap at location " + std::to_string(location));
}

PiecewiseTransition assemble_piecewise(const Trajectory& traj,
                                       std::vector<TransitionMatrix> matrices) {
  if (matrices.size() != traj.segments.size())
    throw ConfigError("need exactly one transition matrix per segment");
  for (size_t s = 0; s < matrices.size(); ++s) matrices[s].segment_index = traj.segments[s].index;
  return PiecewiseTransition(traj.segments, std::move(matrices), traj.total_locations());
}

}  // namespace rirtrack
