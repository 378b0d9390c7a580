#include "rirtrack/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rirtrack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNonzeroThreshold = 1e-9;
}  // namespace

CostMatrix dtw_cost(const Rir& start, const Rir& end) {
  if (start.length() != end.length())
    throw ConfigError("DTW endpoint RIRs must have equal length");
  if (!(start.clock == end.clock))
    throw ConfigError("DTW endpoint RIRs must share a clock");

  const int n = start.length();
  CostMatrix cost;
  cost.n = n;
  cost.d.resize(n + 1, n + 1);
  cost.d.row(0).setConstant(kInf);
  cost.d.col(0).setConstant(kInf);
  cost.d(0, 0) = 0.0;

  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double local = std::abs(end.taps[i - 1] - start.taps[j - 1]);
      const double best = std::min({cost.d(i - 1, j), cost.d(i, j - 1), cost.d(i - 1, j - 1)});
      cost.d(i, j) = local + best;
    }
  }
  return cost;
}

WarpPath backtrack(const CostMatrix& cost) {
  const int n = cost.n;
  if (n < 1 || cost.d.rows() != n + 1) throw ConfigError("malformed cost matrix");

  WarpPath path;
  int i = n;
  int j = n;
  path.pairs.push_back({i - 1, j - 1});
  while (i > 1 || j > 1) {
    const double diag = cost.d(i - 1, j - 1);
    const double vert = cost.d(i - 1, j);
    const double horz = cost.d(i, j - 1);
    const double best = std::min({diag, vert, horz});
    if (diag == best) {
      --i;
      --j;
    } else if (vert == best) {
      --i;
    } else {
      --j;
    }
    path.pairs.push_back({i - 1, j - 1});
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return path;
}

WarpMatrices warp_matrices(const WarpPath& path, int n) {
  const int pairs = path.size();
  if (pairs < 1) throw ConfigError("empty warp path");
  if (path.pairs.front() != WarpPair{0, 0} ||
      path.pairs.back() != WarpPair{n - 1, n - 1})
    throw ConfigError("warp path does not span the full sample range");

  WarpMatrices wm;
  wm.n = n;
  wm.warp_start.resize(pairs, n);
  wm.warp_end.resize(pairs, n);
  std::vector<Eigen::Triplet<double>> st_trip, en_trip;
  st_trip.reserve(pairs);
  en_trip.reserve(pairs);
  std::vector<int> end_hits(n, 0);
  for (int i = 0; i < pairs; ++i) {
    const WarpPair& p = path.pairs[i];
    st_trip.emplace_back(i, p.start_index, 1.0);
    en_trip.emplace_back(i, p.end_index, 1.0);
    ++end_hits[p.end_index];
  }
  wm.warp_start.setFromTriplets(st_trip.begin(), st_trip.end());
  wm.warp_end.setFromTriplets(en_trip.begin(), en_trip.end());

  for (int c = 0; c < n; ++c)
    if (end_hits[c] == 0)
      throw Error("internal: warp path misses an end-RIR sample");

  // mapping(row, col) = (#pairs aligning end sample `row` with start sample
  // `col`) / (#pairs hitting `row`): the diagonal pair counts invert the
  // normal matrix of the least squares problem.
  std::map<std::pair<int, int>, int> cell_counts;
  for (const WarpPair& p : path.pairs) ++cell_counts[{p.end_index, p.start_index}];

  std::vector<Eigen::Triplet<double>> map_trip;
  map_trip.reserve(cell_counts.size());
  for (const auto& [cell, count] : cell_counts)
    map_trip.emplace_back(cell.first, cell.second,
                          static_cast<double>(count) / end_hits[cell.first]);
  wm.mapping.resize(n, n);
  wm.mapping.setFromTriplets(map_trip.begin(), map_trip.end());
  return wm;
}

std::vector<DiagonalSegment> extract_diagonals(const SpMat& mapping, int min_diag_len) {
  if (mapping.rows() != mapping.cols()) throw ConfigError("mapping matrix must be square");
  if (min_diag_len < 1) throw ConfigError("min_diag_len must be >= 1");

  // Bucket nonzero cells by offset = row - col, keeping the row positions.
  std::map<int, std::vector<int>> by_offset;
  for (int outer = 0; outer < mapping.outerSize(); ++outer)
    for (SpMat::InnerIterator it(mapping, outer); it; ++it)
      if (std::abs(it.value()) > kNonzeroThreshold)
        by_offset[static_cast<int>(it.row() - it.col())].push_back(
            static_cast<int>(it.row()));

  std::vector<DiagonalSegment> runs;
  for (auto& [offset, rows] : by_offset) {
    std::sort(rows.begin(), rows.end());
    size_t begin = 0;
    for (size_t i = 1; i <= rows.size(); ++i) {
      // A gap of one missing cell (row difference of 2) does not break the
      // run; row-averaging in the pseudoinverse can blank isolated cells on
      // an otherwise coherent ridge.
      if (i < rows.size() && rows[i] - rows[i - 1] <= 2) continue;
      const int first = rows[begin];
      const int last = rows[i - 1];
      const int length = last - first + 1;
      if (length >= min_diag_len) {
        DiagonalSegment seg;
        seg.first_row = first;
        seg.first_col = first - offset;
        seg.last_row = last;
        seg.last_col = last - offset;
        seg.length = length;
        seg.offset = offset;
        runs.push_back(seg);
      }
      begin = i;
    }
  }

  std::sort(runs.begin(), runs.end(), [](const DiagonalSegment& a, const DiagonalSegment& b) {
    return std::tie(a.first_row, a.offset) < std::tie(b.first_row, b.offset);
  });
  return runs;
}

ReflectionMapEstimate estimate_reflection_map(const std::vector<DiagonalSegment>& runs,
                                              int segment_locations,
                                              const SampleClock& clock) {
  if (segment_locations < 2)
    throw ConfigError("segment must contain at least two locations");

  const double period = clock.period();
  ReflectionMapEstimate map;
  map.provenance = MapProvenance::Dtw;
  map.reflections.reserve(runs.size());

  for (const DiagonalSegment& run : runs) {
    ReflectionEstimate est;
    est.run = run;
    est.step_seconds = run.offset * period / (segment_locations - 1);
    const double step_samples = est.step_seconds / period;
    est.interval.lo = period * std::min(run.first_col + step_samples,
                                        static_cast<double>(run.first_row));
    est.interval.hi = period * std::max(static_cast<double>(run.last_row),
                                        run.last_col + step_samples);
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

PeakToas baseline_peak_toas(const Rir& h, const Rir& reference_pulse, int max_peaks) {
  if (max_peaks < 1) throw ConfigError("need at least one peak");
  if (!(h.clock == reference_pulse.clock))
    throw ConfigError("RIR and reference pulse clock mismatch");

  const int n = h.length();
  const int m = reference_pulse.length();

  // Matched filter: correlate against the reference pulse, then express the
  // lag relative to the pulse's own peak so lags read as TOAs.
  int ref_peak = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(reference_pulse.taps[i]) > std::abs(reference_pulse.taps[ref_peak]))
      ref_peak = i;

  std::vector<double> corr(n + m - 1, 0.0);
  for (int lag = -(m - 1); lag <= n - 1; ++lag) {
    double acc = 0.0;
    const int lo = std::max(0, -lag);
    const int hi = std::min(m - 1, n - 1 - lag);
    for (int i = lo; i <= hi; ++i) acc += reference_pulse.taps[i] * h.taps[i + lag];
    corr[lag + m - 1] = acc;
  }

  struct Peak {
    int lag;
    double value;
  };
  std::vector<Peak> maxima;
  for (int i = 1; i + 1 < static_cast<int>(corr.size()); ++i)
    if (corr[i] > corr[i - 1] && corr[i] >= corr[i + 1])
      maxima.push_back({i - (m - 1), corr[i]});

  std::sort(maxima.begin(), maxima.end(), [](const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.lag < b.lag;
  });

  std::vector<int> picked;
  for (const Peak& p : maxima) {
    if (static_cast<int>(picked.size()) == max_peaks) break;
    bool clear = true;
    for (int lag : picked)
      if (std::abs(lag - p.lag) < kPeakMinSeparation) {
        clear = false;
        break;
      }
    if (clear) picked.push_back(p.lag);
  }

  std::sort(picked.begin(), picked.end());
  PeakToas out;
  out.complete = static_cast<int>(picked.size()) == max_peaks;
  const double period = h.clock.period();
  for (int lag : picked) out.toas.push_back((lag + ref_peak) * period);
  return out;
}

}  // namespace rirtrack
