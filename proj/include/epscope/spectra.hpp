#pragma once

#include <array>
#include <vector>

#include "epscope/matrix.hpp"
#include "epscope/model.hpp"
#include "epscope/types.hpp"

namespace epscope {

/// Branch selector for the two-level square root. sheet = +1 means
/// E1 - E2 = +2R with R the principal square root of the radicand.
enum class Sheet : int { plus = +1, minus = -1 };

inline Sheet other(Sheet s) { return s == Sheet::plus ? Sheet::minus : Sheet::plus; }

/// Two-level eigenvalues on a fixed sheet. e1 - e2 == 2*r by construction.
struct EigenPair2 {
    Cx e1;
    Cx e2;
    Cx r; // signed square root: e1 - e2 = 2r
};

/// Monic polynomial, coefficients in ascending order; coeffs.back() == 1.
struct PolyCoeffs {
    std::vector<Cx> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    void validate() const;
    Cx eval(Cx z) const;
    Cx eval_derivative(Cx z) const;
};

/// Unordered spectrum with per-root backward-error proxies
/// |p(E)| / (1 + |E|)^degree.
struct Spectrum {
    std::vector<Cx> eigenvalues;
    std::vector<double> residuals;

    std::size_t size() const { return eigenvalues.size(); }
    double max_abs_eigenvalue() const;
};

/// Closed-form eigenvalues of the assembled two-level matrix:
/// mean +/- R, R = sqrt(((H11-H22)/2)^2 + H12*H21) on the principal branch.
EigenPair2 eigenvalues_closed_form(const TwoLevelParams& p, Cx lambda,
                                   Sheet sheet = Sheet::plus);

/// Characteristic polynomial det(E*I - M) by the Faddeev-LeVerrier trace
/// recursion. Requires 2 <= n <= 12.
PolyCoeffs char_poly(const ComplexMatrix& m);

/// All roots with multiplicity via Aberth-Ehrlich simultaneous iteration.
/// Initial guesses are roots of unity scaled by the Cauchy bound with a
/// seeded 1e-3 relative jitter.
Spectrum poly_roots(const PolyCoeffs& p, const SolveOptions& opts = {});

Spectrum eigenvalues_general(const ComplexMatrix& m, const SolveOptions& opts = {});

/// Spectral discriminant prod_{i<j} (E_i - E_j)^2 of H(lambda); analytic in
/// lambda and vanishing exactly at eigenvalue coalescences.
Cx discriminant(const MatrixFamily& f, Cx lambda, const SolveOptions& opts = {});

/// Complex eigenvector angle theta on the requested sheet:
/// tan(theta) = 2*H12 / (E1 - E2 + H11 - H22), E1 - E2 = sheet * 2R.
/// A vanishing denominator away from coalescence yields the pi/2 branch
/// representative; a coalescence (R ~ 0) throws CoalescenceError.
Cx theta_angle(const TwoLevelParams& p, Cx lambda, Sheet sheet);

using Vec2 = std::array<Cx, 2>;

/// psi1 = (cos theta, sin theta) for e1, psi2 = (-sin theta, cos theta) for e2.
struct EigenVectors2 {
    Vec2 psi1;
    Vec2 psi2;
};

EigenVectors2 eigenvectors_2x2(const TwoLevelParams& p, Cx lambda, Sheet sheet);

struct EigvecResult {
    std::vector<Cx> v;        // unit Hermitian norm
    double residual = 0.0;    // ||Mv - ev||
    bool ill_conditioned = false;
};

/// Right eigenvector for an eigenvalue estimate e by shifted inverse
/// iteration from a seeded random start.
EigvecResult eigenvector_general(const ComplexMatrix& m, Cx e,
                                 const SolveOptions& opts = {});

} // namespace epscope
