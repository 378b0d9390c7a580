#pragma once

#include "rirtrack/types.hpp"

#include <Eigen/SparseCore>

namespace rirtrack {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Accumulated DTW cost between the two endpoint RIRs of a segment.
///
/// d is (N+1) x (N+1): row/column 0 hold the initialization boundary
/// (d(0,0) = 0, the rest of row/column 0 is +inf). Interior cell
/// d(i, j) = |h_end[i-1] - h_start[j-1]| + min of the three predecessors,
/// so rows track the segment-end RIR and columns the segment-start RIR.
struct CostMatrix {
  Mat d;
  int n = 0;  // RIR length

  double optimal_cost() const { return d(n, n); }
};

CostMatrix dtw_cost(const Rir& start, const Rir& end);

/// One warp correspondence: sample end_index of the segment-end RIR aligned
/// with sample start_index of the segment-start RIR (both 0-based).
struct WarpPair {
  int end_index = 0;
  int start_index = 0;

  bool operator==(const WarpPair&) const = default;
};

/// Monotone alignment path from (0,0) to (N-1,N-1) in sample coordinates.
/// Steps are (1,0), (0,1) or (1,1); the path has at least N pairs.
struct WarpPath {
  std::vector<WarpPair> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
};

/// Minimal-cost warp path recovered from the accumulated cost matrix.
/// Ties prefer the diagonal predecessor, then the end-RIR (row) step,
/// then the start-RIR (column) step.
WarpPath backtrack(const CostMatrix& cost);

/// Warp matrices materializing the path: warp_start picks the start-RIR
/// sample of each pair, warp_end the end-RIR sample (both I x N with one 1
/// per row). mapping = pinv(warp_end) * warp_start is the N x N least
/// squares map taking the start RIR to the end RIR; since warp_end^T
/// warp_end is diagonal with the per-sample pair counts, the pseudoinverse
/// row-averages pairs that share an end sample.
struct WarpMatrices {
  SpMat warp_start;
  SpMat warp_end;
  SpMat mapping;
  int n = 0;
};

WarpMatrices warp_matrices(const WarpPath& path, int n);

/// A maximal constant-offset run of nonzero cells in the mapping matrix.
/// Rows index the segment-end RIR, columns the segment-start RIR, so
/// offset = row - col is the integer sample shift of an aligned reflection
/// across the segment. length counts the cells in the run.
struct DiagonalSegment {
  int first_row = 0;
  int first_col = 0;
  int last_row = 0;
  int last_col = 0;
  int length = 0;
  int offset = 0;
};

/// Scans the mapping matrix for diagonal runs of at least min_diag_len
/// cells (|entry| > 1e-9 counts as nonzero). Runs broken by a single
/// missing cell at the same offset are merged before the length filter.
std::vector<DiagonalSegment> extract_diagonals(const SpMat& mapping, int min_diag_len);

struct ToaInterval {
  double lo = 0.0;  // seconds
  double hi = 0.0;

  bool overlaps(const ToaInterval& other) const {
    return lo <= other.hi && other.lo <= hi;
  }
};

/// Per-reflection estimate extracted from one diagonal run: the TOA step
/// per location and the TOA interval the reflection occupies over the
/// segment.
struct ReflectionEstimate {
  double step_seconds = 0.0;  // TOA change per location step
  ToaInterval interval;
  DiagonalSegment run;  // provenance within the mapping matrix
};

enum class MapProvenance { Dtw, Baseline, Analytic };

struct ReflectionMapEstimate {
  std::vector<ReflectionEstimate> reflections;  // sorted by interval.lo
  MapProvenance provenance = MapProvenance::Dtw;
  /// Pairs of reflection indices whose intervals overlap; the transition
  /// model assumes disjoint intervals, so any entry here is suspect.
  std::vector<std::pair<int, int>> overlapping;

  bool has_overlaps() const { return !overlapping.empty(); }
};

/// Converts diagonal runs into per-reflection TOA steps and intervals for a
/// segment with the given number of locations. Throws ConfigError when the
/// segment has fewer than two locations.
ReflectionMapEstimate estimate_reflection_map(const std::vector<DiagonalSegment>& runs,
                                              int segment_locations,
                                              const SampleClock& clock);

/// Matched-filter + peak-picking TOA estimates: the reference baseline the
/// warp-based estimator is compared against. Returns up to max_peaks TOAs
/// sorted ascending; complete is false when fewer local maxima exist.
struct PeakToas {
  std::vector<double> toas;  // seconds
  bool complete = true;
};

PeakToas baseline_peak_toas(const Rir& h, const Rir& reference_pulse, int max_peaks);

/// Minimum lag separation between picked peaks, in samples (1 ms at 16 kHz).
inline constexpr int kPeakMinSeparation = 16;

}  // namespace rirtrack
