#pragma once

#include "rirtrack/transition.hpp"
#include "rirtrack/types.hpp"

#include <optional>

namespace rirtrack {

/// Noise and initialization parameters of the state-space estimator.
/// Defaults follow the reference experiment: R = 0.01, process noise
/// -50 dB times identity, unit transition factor for the baseline and a
/// small-norm initial covariance.
struct KalmanParams {
  double observation_noise = 0.01;                // R
  double process_noise = 1e-5;                    // sigma_w^2, Q = sigma_w^2 I
  std::optional<Mat> process_noise_matrix;        // full Q override
  double alpha = 1.0;                             // scalar transition factor
  double initial_covariance = 1e-6;               // P+(0) = p0 I

  void validate(int n_taps) const;
};

/// Filter state across one recursion: prior and posterior estimate plus
/// covariances and the last Kalman gain.
struct KalmanState {
  Vec prior;
  Vec posterior;
  Mat cov_prior;
  Mat cov_posterior;
  Vec gain;
};

/// Posterior initialized to the known start RIR, covariance to p0 I.
KalmanState init_state(const Rir& h0, const KalmanParams& params);

/// Prediction with a segment transition matrix:
/// prior = A posterior, cov_prior = A cov_posterior A^T + Q.
void predict(KalmanState& state, const TransitionMatrix& a, const KalmanParams& params);

/// Prediction with the scalar transition factor (A = alpha I).
void predict_scalar(KalmanState& state, double alpha, const KalmanParams& params);

/// Measurement update with regressor x and observation y:
/// gain = cov_prior x / (x^T cov_prior x + R), posterior = prior +
/// gain * innovation, cov_posterior = (I - gain x^T) cov_prior followed by
/// symmetrization.
void update(KalmanState& state, const Vec& regressor_vec, double observation,
            const KalmanParams& params);

/// The three compared algorithms: Kalman filter with scalar transition
/// factor, Kalman filter with the segment transition matrices, and the
/// pure-prediction interpolation using the same matrices.
enum class Variant { KfAlpha, KfTransition, LiTransition };

std::string variant_key(Variant v);       // stable machine name
std::string variant_label(Variant v);     // display name
Variant variant_from_key(const std::string& key);

/// Which posteriors to retain. Keeping everything is fine at small scale;
/// long runs pass the location indices evaluation will need.
struct KeepPolicy {
  bool all = true;
  std::vector<int> indices;  // used when all == false; sorted internally
};

struct FilterRun {
  std::vector<int> kept_indices;    // sorted
  std::vector<Vec> kept;            // posterior estimates, same order
  std::vector<double> reconstructed;  // x^T(l) posterior(l) per location
  std::vector<double> gain_norm;      // per location, 0 at l = 0
  std::vector<double> innovation;     // per location, 0 at l = 0

  const Vec& at(int location) const;
};

/// Runs one variant over l = 0 .. total-1. The transition map is required
/// for the matrix-based variants and ignored for KfAlpha; x and y are
/// ignored by LiTransition. One observation is consumed per location.
FilterRun run_filter(Variant variant, const PiecewiseTransition* transitions,
                     const SourceSignal& x, const MicRecording& y, const Rir& initial,
                     const KalmanParams& params, const KeepPolicy& keep = {});

}  // namespace rirtrack
