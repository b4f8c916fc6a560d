#pragma once

#include <optional>
#include <vector>

#include "epscope/epfind.hpp"
#include "epscope/model.hpp"
#include "epscope/spectra.hpp"

namespace epscope {

/// Continuously labeled eigenvalue (and optional eigenvector) curves over a
/// real lambda grid. Adaptive bisection inserts extra rows; steps where the
/// labeling ran out of bisection depth are flagged degenerate.
struct TrajectorySet {
    std::vector<double> lambdas;
    std::vector<std::vector<Cx>> energies;              // [step][label]
    std::vector<std::vector<std::vector<Cx>>> vectors;  // empty unless requested
    std::vector<double> pairing_cost;                   // per accepted step (size-1)
    std::vector<std::size_t> degenerate_steps;          // indices into lambdas
    std::optional<MatrixFamily> family;                 // producer family, if any

    std::size_t levels() const { return energies.empty() ? 0 : energies.front().size(); }
    std::size_t size() const { return lambdas.size(); }
};

enum class CrossingKind {
    RE_AVOID_IM_CROSS,  // level repulsion, width crossing
    RE_CROSS_IM_AVOID,  // level crossing, width repulsion
    BOTH_CROSS_AT_EP,   // sweep passes through the EP itself
};

const char* to_string(CrossingKind k);

struct CrossingClass {
    CrossingKind kind = CrossingKind::RE_AVOID_IM_CROSS;
    double crossing_lambda = 0.0;
    double ep_distance = std::numeric_limits<double>::quiet_NaN(); // |Im lambda_c| of nearest EP
    double min_gap = 0.0;
};

/// Sweep real lambda with continuous labeling by minimal-distance assignment;
/// bisects steps (up to 12 levels) whenever the assignment cost exceeds half
/// the smallest eigenvalue gap at the previous point. Vectors, if requested,
/// are gauge-aligned to the previous step (real positive overlap).
TrajectorySet sweep_real(const MatrixFamily& f, double lambda_min, double lambda_max,
                         std::size_t steps, bool with_vectors = false,
                         const SolveOptions& opts = {});

/// Classify the near-EP passage of a trajectory pair: which of Re(Ei-Ej),
/// Im(Ei-Ej) changes sign around the gap minimum. A degenerate-flagged step
/// (or simultaneous sign change of both parts) means the sweep ran through
/// the EP itself. Throws NoPassage when neither part changes sign.
CrossingClass classify_crossing(const TrajectorySet& t,
                                std::pair<std::size_t, std::size_t> pair,
                                const std::vector<EPLocation>& known_eps = {});

/// Angle (degrees, folded to [0, 90]) between the incoming tangent of an
/// energy trajectory and its outgoing continuation through a real-axis EP.
/// 90 degrees is the square-root signature.
double crossing_angle_at_ep(const MatrixFamily& f, double lambda_c,
                            const SolveOptions& opts = {});

struct MixingResult {
    double alpha = 0.0;       // in [0, pi/2]
    int sign1 = 1, sign2 = 1; // sign pattern of the fitted rotation
    double residual = 0.0;    // least-squares misfit
};

/// Fit the real-rotation form psi_top = psi1 cos a - psi2 sin a,
/// psi_bot = psi1 sin a + psi2 cos a between two 2-level frames, after
/// canonicalizing each after-vector's phase (largest component real positive).
MixingResult mixing_angle(const std::array<Vec2, 2>& basis_before,
                          const std::array<Vec2, 2>& vecs_after);

} // namespace epscope
