#pragma once

#include "rirtrack/types.hpp"

namespace rirtrack {

/// Normalized sinc, sin(pi x)/(pi x). Arguments within 1e-9 of an integer
/// are snapped so that integer shifts produce exact Kronecker deltas.
double sinc(double x);

/// Truncated sinc with a Hann taper over |x| <= halfwidth; zero outside.
/// Used when synthesizing band-limited pulses of finite support.
double tapered_sinc(double x, int halfwidth);

/// Regressor vector (x(k), x(k-1), ..., x(k-N+1)); samples before k=0 are
/// zero. Throws IndexError when k is outside the signal.
Vec regressor(const SourceSignal& x, int k, int n_taps);

/// Noise-free observation x^T(k) h: the microphone sample produced by an
/// RIR h when driven by x at time k.
double convolve_observe(const Rir& h, const SourceSignal& x, int k);

}  // namespace rirtrack
