#include "rirtrack/metrics.hpp"

#include "rirtrack/signal_ops.hpp"

#include <algorithm>
#include <cmath>

namespace rirtrack {

AlignmentResult align_ncc(std::span<const Vec> estimates, int first_index,
                          const Rir& measured, int location, int window) {
  if (window < 0) throw ConfigError("NCC window must be non-negative");
  const double meas_norm = measured.taps.norm();
  if (!(meas_norm > 0)) throw NumericError("NCC undefined for an all-zero measured RIR");

  const int count = static_cast<int>(estimates.size());
  bool found = false;
  AlignmentResult best;

  // Lags in preference order: 0, -1, +1, -2, +2, ... so that equal peaks
  // resolve toward zero, then the smaller magnitude.
  for (int step = 0; step <= 2 * window; ++step) {
    const int magnitude = (step + 1) / 2;
    const int lag = (step % 2 == 1) ? -magnitude : magnitude;
    const int index = location - lag - first_index;
    if (index < 0 || index >= count) continue;
    const Vec& est = estimates[index];
    if (est.size() != measured.taps.size())
      throw ConfigError("estimate/measured length mismatch");
    const double est_norm = est.norm();
    if (!(est_norm > 0)) continue;  // NCC undefined for this candidate
    const double ncc = measured.taps.dot(est) / (meas_norm * est_norm);
    if (!found || ncc > best.ncc_peak) {
      best.lag = lag;
      best.ncc_peak = ncc;
      found = true;
    }
  }
  if (!found) throw NumericError("no searchable lag for NCC alignment");
  return best;
}

double misalignment_db(const Vec& estimate, const Vec& measured) {
  if (estimate.size() != measured.size())
    throw ConfigError("misalignment requires equal lengths");
  const double meas_norm = measured.norm();
  if (!(meas_norm > 0)) throw NumericError("misalignment undefined for zero measured RIR");
  const double err_norm = (estimate - measured).norm();
  if (err_norm == 0.0) return kMisalignmentFloorDb;
  return std::max(kMisalignmentFloorDb, 20.0 * std::log10(err_norm / meas_norm));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw ConfigError("correlation requires equal nonzero lengths");
  const size_t count = a.size();
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < count; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(count);
  mean_b /= static_cast<double>(count);

  double cross = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < count; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (!(var_a > 0) || !(var_b > 0))
    throw NumericError("correlation undefined for a zero-variance sequence");
  return cross / std::sqrt(var_a * var_b);
}

double reconstruct_and_correlate(std::span<const Rir> estimates, const SourceSignal& x,
                                 const MicRecording& y) {
  const size_t total = estimates.size();
  if (total == 0 || y.samples.size() < total || x.samples.size() < total)
    throw ConfigError("reconstruction needs one estimate per recorded location");

  std::vector<double> reconstructed(total);
  for (size_t l = 0; l < total; ++l)
    reconstructed[l] = convolve_observe(estimates[l], x, static_cast<int>(l));
  return pearson(reconstructed, std::span<const double>(y.samples.data(), total));
}

}  // namespace rirtrack
