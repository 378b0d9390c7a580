#include "rirtrack/resample.hpp"

#include "rirtrack/signal_ops.hpp"
#include "rirtrack/types.hpp"

#include <cmath>
#include <numeric>

namespace rirtrack {

std::vector<double> resample_poly(const std::vector<double>& input, int up, int down) {
  if (up < 1 || down < 1) throw ConfigError("resampling factors must be positive");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return input;

  // Prototype lowpass at the tighter of the two Nyquist limits, evaluated
  // directly on the fractional output grid (equivalent to upfirdn with a
  // Hann-windowed sinc, without materializing the upsampled stream).
  const int q = std::max(up, down);
  const int halfwidth_in = 12 * q;  // in input samples times up
  const size_t out_len = (input.size() * static_cast<size_t>(up) + down - 1) / down;

  std::vector<double> out(out_len, 0.0);
  for (size_t m = 0; m < out_len; ++m) {
    const double center = static_cast<double>(m) * down / up;  // input index
    const long lo = std::lround(std::ceil(center - static_cast<double>(halfwidth_in) / up));
    const long hi = std::lround(std::floor(center + static_cast<double>(halfwidth_in) / up));
    double acc = 0.0;
    for (long k = std::max<long>(lo, 0);
         k <= std::min<long>(hi, static_cast<long>(input.size()) - 1); ++k) {
      const double t = (k - center) * up;  // position on the high-rate grid
      acc += input[k] * tapered_sinc(t / q, halfwidth_in / q) / q;
    }
    out[m] = acc * up;
  }
  return out;
}

}  // namespace rirtrack
