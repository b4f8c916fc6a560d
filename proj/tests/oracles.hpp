#pragma once

// Shared test fixtures and independent oracles. Everything here is
// deliberately written against the definitions, not the library internals:
// the determinant is a cofactor expansion, the two-level radicand is the
// textbook formula evaluated directly from the parameters.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "epscope/matrix.hpp"
#include "epscope/model.hpp"

namespace epscope::testing {

inline TwoLevelParams fig1_params(double mu) {
    TwoLevelParams p;
    p.eps1 = {1.0, 0.0};
    p.eps2 = {2.0, 0.0};
    p.omega1 = 1.0;
    p.omega2 = -1.0;
    p.phi1 = 0.2;
    p.mu = mu;
    p.sigma1 = 1.0;
    p.sigma2 = 0.0;
    p.phi2 = 0.0;
    return p;
}

inline MatrixFamily fig1_family(double mu) { return to_family(fig1_params(mu)); }

// radicand of the closed-form eigenvalues, straight from the parameter form:
// R^2 = ((eps1-eps2)/2)^2 + (lambda(omega1-omega2)/2)^2
//     + (1/2) lambda (eps1-eps2)(omega1-omega2) cos(2 phi1)      (mu = 0)
inline Cx radicand_mu0(const TwoLevelParams& p, Cx lambda) {
    const Cx a = p.eps1 - p.eps2;
    const double w = p.omega1 - p.omega2;
    return (a / 2.0) * (a / 2.0) + (lambda * w / 2.0) * (lambda * w / 2.0) +
           0.5 * lambda * a * w * std::cos(2.0 * p.phi1);
}

// cofactor-expansion determinant; exponential cost, fine for n <= 6
inline Cx brute_determinant(const ComplexMatrix& m, std::vector<bool>& used_cols,
                            std::size_t row) {
    const std::size_t n = m.dim();
    if (row == n) return Cx{1.0, 0.0};
    Cx det{0.0, 0.0};
    double sign = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (used_cols[j]) continue;
        used_cols[j] = true;
        det += sign * m(row, j) * brute_determinant(m, used_cols, row + 1);
        used_cols[j] = false;
        sign = -sign;
    }
    return det;
}

inline Cx brute_determinant(const ComplexMatrix& m) {
    std::vector<bool> used(m.dim(), false);
    return brute_determinant(m, used, 0);
}

// greedy-free set distance: assign each a to its best unused b, trying all
// starting orders is overkill; a Hungarian-style sweep over nearest matches
// is enough as an upper bound that vanishes when the sets coincide.
inline double set_distance(std::vector<Cx> a, std::vector<Cx> b) {
    double worst = 0.0;
    for (const Cx& x : a) {
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(x - b[j]);
            if (d < bd) { bd = d; best = j; }
        }
        worst = std::max(worst, bd);
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

inline ComplexMatrix random_complex_matrix(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Cx{u(rng), u(rng)};
    return m;
}

inline MatrixFamily random_real_symmetric_family(std::size_t n, std::mt19937_64& rng,
                                                 double diag_spread = 2.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixFamily f;
    f.h0 = ComplexMatrix(n);
    f.h1 = ComplexMatrix(n);
    f.a = ComplexMatrix::zero(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Cx x{u(rng), 0.0}, y{u(rng), 0.0};
            f.h0(i, j) = f.h0(j, i) = x;
            f.h1(i, j) = f.h1(j, i) = y;
        }
    for (std::size_t i = 0; i < n; ++i)
        f.h0(i, i) += Cx{diag_spread * static_cast<double>(i), 0.0};
    return f;
}

} // namespace epscope::testing
