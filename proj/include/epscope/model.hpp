#pragma once

#include "epscope/matrix.hpp"
#include "epscope/types.hpp"

namespace epscope {

/// Parameters of the absorptive two-level family
///   H(lambda) = diag(eps1, eps2)
///             + lambda * U(phi1) diag(omega1, omega2) U(phi1)^T
///             - i mu   * U(phi2) diag(sigma1, sigma2) U(phi2)^T
/// With mu = 0 and real eps this reduces to the plain real coupled model.
struct TwoLevelParams {
    Cx eps1{0.0, 0.0};
    Cx eps2{0.0, 0.0};
    double omega1 = 0.0;
    double omega2 = 0.0;
    double phi1 = 0.0;   // coupling rotation angle (radians)
    double mu = 0.0;     // absorption strength, >= 0
    double sigma1 = 0.0; // absorption channel weights
    double sigma2 = 0.0;
    double phi2 = 0.0;   // absorption rotation angle (radians)

    void validate() const;
    // Operations dividing by (omega1 - omega2) must call this.
    void require_distinct_slopes() const;
};

/// General N-level linear family H(lambda) = h0 + lambda*h1 - i*mu*a.
struct MatrixFamily {
    ComplexMatrix h0;
    ComplexMatrix h1;
    ComplexMatrix a;
    double mu = 0.0;

    std::size_t dim() const { return h0.dim(); }
    void validate() const;
};

/// 2x2 rotation matrix [[cos phi, -sin phi], [sin phi, cos phi]].
ComplexMatrix rotation_matrix(double phi);

/// U(phi) diag(d0, d1) U(phi)^T, assembled so the off-diagonal entries are
/// equal bitwise.
ComplexMatrix rotated_diagonal(double phi, Cx d0, Cx d1);

ComplexMatrix build_two_level(const TwoLevelParams& p, Cx lambda);

ComplexMatrix build_general(const MatrixFamily& f, Cx lambda);

/// The two-level family expressed as a general MatrixFamily.
MatrixFamily to_family(const TwoLevelParams& p);

/// Coupled-resonator preset: two modes with widths Gamma_k, tunable detuning
/// and fixed coupling x. H(lambda) = [[eps1 + lambda, x], [x, eps2]] with
/// eps_k = E_k - i Gamma_k / 2, E1 = deltaE, E2 = 0.
MatrixFamily resonator_params(double deltaE, double gamma1, double gamma2, double x);

} // namespace epscope
