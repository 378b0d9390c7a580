#pragma once

#include "rirtrack/types.hpp"

#include <span>

namespace rirtrack {

/// Reported when est == meas exactly (the log of zero error).
inline constexpr double kMisalignmentFloorDb = -300.0;

/// Location lag maximizing the normalized cross correlation between the
/// measured RIR and the estimate sequence around it.
struct AlignmentResult {
  int lag = 0;        // estimate index used is l_p - lag
  double ncc_peak = 0.0;
};

/// Searches lag in [-window, window], keeping the estimate index
/// first_index + i in range. estimates[i] is the estimate at location
/// first_index + i. Ties prefer lag 0, then the smaller |lag|, then the
/// negative one. Throws NumericError when the measured RIR is all zero or
/// no lag is searchable.
AlignmentResult align_ncc(std::span<const Vec> estimates, int first_index,
                          const Rir& measured, int location, int window);

/// Normalized misalignment 20 log10(||est - meas|| / ||meas||) in dB,
/// floored at kMisalignmentFloorDb for exact matches. Throws NumericError
/// when the measured norm is zero.
double misalignment_db(const Vec& estimate, const Vec& measured);

/// Pearson correlation coefficient; NumericError on zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Convolves the estimated location-variant RIR with the source signal and
/// correlates the result with the recorded microphone signal.
double reconstruct_and_correlate(std::span<const Rir> estimates, const SourceSignal& x,
                                 const MicRecording& y);

/// One evaluated point of a misalignment curve.
struct CurvePoint {
  int point_id = 0;   // measurement point p
  int location = 0;   // l_p
  int lag = 0;        // NCC alignment lag
  double nm_db = 0.0;
};

}  // namespace rirtrack
