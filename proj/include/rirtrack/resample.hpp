#pragma once

#include <vector>

namespace rirtrack {

/// Rational-rate polyphase resampling by up/down with a Hann-windowed sinc
/// anti-aliasing filter. up == down returns the input unchanged.
std::vector<double> resample_poly(const std::vector<double>& input, int up, int down);

}  // namespace rirtrack
