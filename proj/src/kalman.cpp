#include "rirtrack/kalman.hpp"

#include "rirtrack/signal_ops.hpp"

#include <algorithm>
#include <cmath>

namespace rirtrack {

void KalmanParams::validate(int n_taps) const {
  if (!(observation_noise > 0)) throw ConfigError("observation noise R must be positive");
  if (process_noise < 0) throw ConfigError("process noise must be non-negative");
  if (initial_covariance < 0) throw ConfigError("initial covariance must be non-negative");
  if (process_noise_matrix &&
      (process_noise_matrix->rows() != n_taps || process_noise_matrix->cols() != n_taps))
    throw ConfigError("process noise matrix dimension mismatch");
}

namespace {

void add_process_noise(Mat& cov, const KalmanParams& params) {
  if (params.process_noise_matrix) {
    cov += *params.process_noise_matrix;
  } else if (params.process_noise > 0) {
    cov.diagonal().array() += params.process_noise;
  }
}

void symmetrize(Mat& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

KalmanState init_state(const Rir& h0, const KalmanParams& params) {
  params.validate(h0.length());
  KalmanState state;
  state.posterior = h0.taps;
  state.prior = h0.taps;
  state.cov_posterior = Mat::Zero(h0.length(), h0.length());
  state.cov_posterior.diagonal().array() += params.initial_covariance;
  state.cov_prior = state.cov_posterior;
  state.gain = Vec::Zero(h0.length());
  return state;
}

void predict(KalmanState& state, const TransitionMatrix& a, const KalmanParams& params) {
  if (a.n_taps != state.posterior.size())
    throw ConfigError("transition/state dimension mismatch");
  state.prior = a.apply(state.posterior);
  state.cov_prior = a.propagate_covariance(state.cov_posterior);
  add_process_noise(state.cov_prior, params);
}

void predict_scalar(KalmanState& state, double alpha, const KalmanParams& params) {
  state.prior = alpha * state.posterior;
  state.cov_prior = (alpha * alpha) * state.cov_posterior;
  add_process_noise(state.cov_prior, params);
}

void update(KalmanState& state, const Vec& regressor_vec, double observation,
            const KalmanParams& params) {
  if (regressor_vec.size() != state.prior.size())
    throw ConfigError("regressor/state dimension mismatch");

  const Vec px = state.cov_prior * regressor_vec;
  const double denom = regressor_vec.dot(px) + params.observation_noise;
  state.gain = px / denom;

  const double innovation = observation - regressor_vec.dot(state.prior);
  state.posterior = state.prior + state.gain * innovation;

  // (I - k x^T) P = P - k (x^T P); x^T P is px^T because the prior
  // covariance is kept symmetric.
  state.cov_posterior = state.cov_prior;
  state.cov_posterior.noalias() -= state.gain * px.transpose();
  symmetrize(state.cov_posterior);
}

std::string variant_key(Variant v) {
  switch (v) {
    case Variant::KfAlpha: return "kf_alpha";
    case Variant::KfTransition: return "kf_transition";
    case Variant::LiTransition: return "li_transition";
  }
  throw ConfigError("unknown variant");
}

std::string variant_label(Variant v) {
  switch (v) {
    case Variant::KfAlpha: return "KF-alpha";
    case Variant::KfTransition: return "KF-A(l)";
    case Variant::LiTransition: return "LI-A(l)";
  }
  throw ConfigError("unknown variant");
}

Variant variant_from_key(const std::string& key) {
  if (key == "kf_alpha") return Variant::KfAlpha;
  if (key == "kf_transition") return Variant::KfTransition;
  if (key == "li_transition") return Variant::LiTransition;
  throw ConfigError("unknown variant key: " + key);
}

const Vec& FilterRun::at(int location) const {
  const auto it = std::lower_bound(kept_indices.begin(), kept_indices.end(), location);
  if (it == kept_indices.end() || *it != location)
    throw IndexError("posterior not retained for location " + std::to_string(location));
  return kept[static_cast<size_t>(it - kept_indices.begin())];
}

FilterRun run_filter(Variant variant, const PiecewiseTransition* transitions,
                     const SourceSignal& x, const MicRecording& y, const Rir& initial,
                     const KalmanParams& params, const KeepPolicy& keep) {
  const bool needs_transitions = variant != Variant::KfAlpha;
  if (needs_transitions && transitions == nullptr)
    throw ConfigError("variant requires a piecewise transition map");

  const int total = needs_transitions ? transitions->total_locations()
                                      : static_cast<int>(y.samples.size());
  if (total < 1) throw ConfigError("empty run");

  // LiTransition runs open loop, but still reconstructs x^T(l) h(l) when a
  // source signal is supplied so its output can be correlated with y.
  const bool have_source = static_cast<int>(x.samples.size()) >= total;
  if (variant != Variant::LiTransition) {
    if (static_cast<int>(y.samples.size()) < total)
      throw ConfigError("recording shorter than the trajectory");
    if (!have_source) throw ConfigError("source signal shorter than the trajectory");
    if (!(x.clock == y.clock) || !(x.clock == initial.clock))
      throw ConfigError("clock mismatch between source, recording and initial RIR");
  }

  const int n = initial.length();
  params.validate(n);

  std::vector<int> wanted;
  if (keep.all) {
    wanted.resize(total);
    for (int i = 0; i < total; ++i) wanted[i] = i;
  } else {
    wanted = keep.indices;
    std::sort(wanted.begin(), wanted.end());
    wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
    if (!wanted.empty() && (wanted.front() < 0 || wanted.back() >= total))
      throw ConfigError("keep index outside the run");
  }

  FilterRun run;
  run.kept_indices = wanted;
  run.kept.reserve(wanted.size());
  run.reconstructed.resize(total, 0.0);
  run.gain_norm.resize(total, 0.0);
  run.innovation.resize(total, 0.0);

  KalmanState state = init_state(initial, params);

  size_t next_keep = 0;
  Vec reg;

  for (int l = 0; l < total; ++l) {
    if (l > 0) {
      switch (variant) {
        case Variant::KfAlpha:
          predict_scalar(state, params.alpha, params);
          break;
        case Variant::KfTransition:
          predict(state, transitions->at(l), params);
          break;
        case Variant::LiTransition:
          state.prior = transitions->at(l).apply(state.posterior);
          break;
      }
      if (variant == Variant::LiTransition) {
        state.posterior = state.prior;
      } else {
        reg = regressor(x, l, n);
        update(state, reg, y.samples[l], params);
        run.gain_norm[l] = state.gain.norm();
        run.innovation[l] = y.samples[l] - reg.dot(state.prior);
      }
    }

    if (have_source) {
      if (l == 0 || variant == Variant::LiTransition) reg = regressor(x, l, n);
      run.reconstructed[l] = reg.dot(state.posterior);
    }

    if (next_keep < wanted.size() && wanted[next_keep] == l) {
      run.kept.push_back(state.posterior);
      ++next_keep;
    }
  }
  return run;
}

}  // namespace rirtrack
