#pragma once

#include <complex>
#include <cmath>
#include <cstdint>

namespace epscope {

using Cx = std::complex<double>;

// Eigenvalue pair is treated as coalesced below this relative gap.
inline double coalescence_tol(double scale) { return 1e-10 * (1.0 + scale); }

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Cx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Options threaded through every solver entry point. The seed fixes the
// Aberth starting-point jitter and any internal random starts, so repeated
// runs (serial or parallel) are bitwise identical.
struct SolveOptions {
    std::uint64_t seed = 0;
};

} // namespace epscope
