#include "epscope/model.hpp"

#include <cmath>

#include "epscope/errors.hpp"

namespace epscope {

void TwoLevelParams::validate() const {
    if (!is_finite(eps1) || !is_finite(eps2) || !is_finite(omega1) ||
        !is_finite(omega2) || !is_finite(phi1) || !is_finite(mu) ||
        !is_finite(sigma1) || !is_finite(sigma2) || !is_finite(phi2))
        throw InvalidInput("TwoLevelParams: all parameters must be finite");
    if (mu < 0.0) throw InvalidInput("TwoLevelParams: mu must be >= 0");
}

void TwoLevelParams::require_distinct_slopes() const {
    if (omega1 == omega2) throw DegenerateSlopes();
}

void MatrixFamily::validate() const {
    const std::size_t n = h0.dim();
    if (n < 2) throw InvalidFamily("MatrixFamily: dimension must be >= 2");
    if (h1.dim() != n || a.dim() != n)
        throw InvalidFamily("MatrixFamily: h0, h1 and a must share one dimension");
    if (!is_finite(mu) || mu < 0.0)
        throw InvalidFamily("MatrixFamily: mu must be finite and >= 0");
    if (!h0.finite() || !h1.finite() || !a.finite())
        throw InvalidFamily("MatrixFamily: matrix entries must be finite");
}

ComplexMatrix rotation_matrix(double phi) {
    if (!is_finite(phi)) throw InvalidInput("rotation_matrix: phi must be finite");
    const double c = std::cos(phi), s = std::sin(phi);
    return ComplexMatrix(2, {Cx{c, 0.0}, Cx{-s, 0.0}, Cx{s, 0.0}, Cx{c, 0.0}});
}

ComplexMatrix rotated_diagonal(double phi, Cx d0, Cx d1) {
    const double c = std::cos(phi), s = std::sin(phi);
    const Cx off = (d0 - d1) * (s * c);
    ComplexMatrix m(2);
    m(0, 0) = d0 * (c * c) + d1 * (s * s);
    m(1, 1) = d0 * (s * s) + d1 * (c * c);
    m(0, 1) = off;
    m(1, 0) = off;
    return m;
}

ComplexMatrix build_two_level(const TwoLevelParams& p, Cx lambda) {
    p.validate();
    if (!is_finite(lambda)) throw InvalidInput("build_two_level: lambda must be finite");
    ComplexMatrix h = ComplexMatrix::diagonal({p.eps1, p.eps2});
    h += lambda * rotated_diagonal(p.phi1, Cx{p.omega1, 0.0}, Cx{p.omega2, 0.0});
    h += Cx{0.0, -p.mu} * rotated_diagonal(p.phi2, Cx{p.sigma1, 0.0}, Cx{p.sigma2, 0.0});
    return h;
}

ComplexMatrix build_general(const MatrixFamily& f, Cx lambda) {
    f.validate();
    if (!is_finite(lambda)) throw InvalidInput("build_general: lambda must be finite");
    ComplexMatrix h = f.h0;
    h += lambda * f.h1;
    h += Cx{0.0, -f.mu} * f.a;
    return h;
}

MatrixFamily to_family(const TwoLevelParams& p) {
    p.validate();
    MatrixFamily f;
    f.h0 = ComplexMatrix::diagonal({p.eps1, p.eps2});
    f.h1 = rotated_diagonal(p.phi1, Cx{p.omega1, 0.0}, Cx{p.omega2, 0.0});
    f.a = rotated_diagonal(p.phi2, Cx{p.sigma1, 0.0}, Cx{p.sigma2, 0.0});
    f.mu = p.mu;
    return f;
}

MatrixFamily resonator_params(double deltaE, double gamma1, double gamma2, double x) {
    if (!is_finite(deltaE) || !is_finite(gamma1) || !is_finite(gamma2) || !is_finite(x))
        throw InvalidInput("resonator_params: parameters must be finite");
    if (gamma1 < 0.0 || gamma2 < 0.0)
        throw InvalidInput("resonator_params: widths must be >= 0");
    const Cx eps1{deltaE, -gamma1 / 2.0};
    const Cx eps2{0.0, -gamma2 / 2.0};
    MatrixFamily f;
    f.h0 = ComplexMatrix(2, {eps1, Cx{x, 0.0}, Cx{x, 0.0}, eps2});
    f.h1 = ComplexMatrix(2, {Cx{1.0, 0.0}, Cx{0.0, 0.0}, Cx{0.0, 0.0}, Cx{0.0, 0.0}});
    f.a = ComplexMatrix::zero(2);
    f.mu = 0.0;
    return f;
}

} // namespace epscope
