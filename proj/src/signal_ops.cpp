#include "rirtrack/signal_ops.hpp"

#include <cmath>

namespace rirtrack {

double sinc(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9) return nearest == 0.0 ? 1.0 : 0.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

double tapered_sinc(double x, int halfwidth) {
  if (std::abs(x) > halfwidth) return 0.0;
  const double taper = 0.5 * (1.0 + std::cos(M_PI * x / halfwidth));
  return sinc(x) * taper;
}

Vec regressor(const SourceSignal& x, int k, int n_taps) {
  const int total = static_cast<int>(x.samples.size());
  if (k < 0 || k >= total) throw IndexError("regressor index outside signal");
  if (n_taps < 1) throw ConfigError("regressor length must be positive");
  Vec out(n_taps);
  for (int i = 0; i < n_taps; ++i) out[i] = (k - i >= 0) ? x.samples[k - i] : 0.0;
  return out;
}

double convolve_observe(const Rir& h, const SourceSignal& x, int k) {
  if (!(h.clock == x.clock)) throw ConfigError("RIR and source clock mismatch");
  const int total = static_cast<int>(x.samples.size());
  if (k < 0 || k >= total) throw IndexError("observation index outside signal");
  // Same dot product as regressor(x,k,N).dot(taps), written out to avoid the
  // temporary on the per-sample path.
  double acc = 0.0;
  const int n = h.length();
  const int lo = std::max(0, k - n + 1);
  for (int j = lo; j <= k; ++j) acc += x.samples[j] * h.taps[k - j];
  return acc;
}

}  // namespace rirtrack
