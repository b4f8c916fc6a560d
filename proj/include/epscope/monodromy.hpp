#pragma once

#include <vector>

#include "epscope/epfind.hpp"
#include "epscope/model.hpp"
#include "epscope/spectra.hpp"

namespace epscope {

/// Closed circular loop in the complex lambda plane. steps samples per loop.
struct LoopSpec {
    Cx center{0.0, 0.0};
    double radius = 0.0;
    std::size_t steps = 0;   // >= 64, per loop
    std::size_t loops = 1;
    int orientation = +1;    // +1 counterclockwise, -1 clockwise

    void validate() const;
};

/// Permutation and per-label phase holonomy after closed loops.
struct MonodromyResult {
    std::vector<std::size_t> permutation; // start label k ends on label permutation[k]
    std::vector<Cx> phases;               // unit modulus, +/-1 for closed loops
    double discretization_error = 0.0;    // accumulated gauge-overlap deficit
};

/// Rescale next_raw by a unit complex factor and normalize so that
/// <prev, result> is real positive. Throws GaugeBreakdown on (numerically)
/// orthogonal inputs, which forces step bisection upstream.
std::vector<Cx> gauge_align(const std::vector<Cx>& prev, const std::vector<Cx>& next_raw);

/// Walk lambda(t) = center + radius * exp(2*pi*i*orientation*t), matching
/// eigenvalues by minimal-distance assignment and transporting eigenvectors
/// continuously; on return to the start reports the label permutation and
/// the per-label phase factor.
MonodromyResult encircle(const MatrixFamily& f, const LoopSpec& spec,
                         const SolveOptions& opts = {});

/// True iff one loop around the EP exchanges exactly the coalescing pair.
bool sheet_swap_check(const MatrixFamily& f, const EPLocation& ep,
                      const SolveOptions& opts = {});

} // namespace epscope
