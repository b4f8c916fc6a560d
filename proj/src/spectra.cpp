#include "epscope/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "epscope/errors.hpp"

namespace epscope {

namespace {

constexpr std::size_t kMaxDim = 12;
constexpr int kAberthMaxIter = 500;
constexpr double kAberthResidualTol = 1e-11;

double scaled_residual(const PolyCoeffs& p, Cx z) {
    const double d = static_cast<double>(p.degree());
    return std::abs(p.eval(z)) / std::pow(1.0 + std::abs(z), d);
}

} // namespace

void PolyCoeffs::validate() const {
    if (degree() < 1) throw InvalidInput("PolyCoeffs: degree must be >= 1");
    for (const auto& c : coeffs)
        if (!is_finite(c)) throw InvalidInput("PolyCoeffs: coefficients must be finite");
    if (coeffs.back() != Cx{1.0, 0.0})
        throw InvalidInput("PolyCoeffs: polynomial must be monic");
}

Cx PolyCoeffs::eval(Cx z) const {
    Cx v{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
    return v;
}

Cx PolyCoeffs::eval_derivative(Cx z) const {
    Cx v{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > 1;)
        v = v * z + coeffs[i] * static_cast<double>(i);
    return v;
}

double Spectrum::max_abs_eigenvalue() const {
    double m = 0.0;
    for (const auto& e : eigenvalues) m = std::max(m, std::abs(e));
    return m;
}

EigenPair2 eigenvalues_closed_form(const TwoLevelParams& p, Cx lambda, Sheet sheet) {
    const ComplexMatrix h = build_two_level(p, lambda);
    const Cx mean = (h(0, 0) + h(1, 1)) / 2.0;
    const Cx half_diff = (h(0, 0) - h(1, 1)) / 2.0;
    const Cx radicand = half_diff * half_diff + h(0, 1) * h(1, 0);
    const Cx R = std::sqrt(radicand); // principal branch
    const Cx upper = mean + R;
    const Cx lower = mean - R;
    if (sheet == Sheet::plus) return {upper, lower, R};
    return {lower, upper, -R};
}

PolyCoeffs char_poly(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    if (n < 2) throw InvalidInput("char_poly: dimension must be >= 2");
    if (n > kMaxDim) throw InvalidInput("char_poly: dimension must be <= 12");
    if (!m.finite()) throw InvalidInput("char_poly: matrix entries must be finite");

    // Faddeev-LeVerrier: B_0 = I, A_k = M B_{k-1}, a_{n-k} = -tr(A_k)/k,
    // B_k = A_k + a_{n-k} I.
    PolyCoeffs p;
    p.coeffs.assign(n + 1, Cx{0.0, 0.0});
    p.coeffs[n] = Cx{1.0, 0.0};
    ComplexMatrix B = ComplexMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        ComplexMatrix A = m.matmul(B);
        const Cx ak = -A.trace() / static_cast<double>(k);
        p.coeffs[n - k] = ak;
        B = A;
        for (std::size_t i = 0; i < n; ++i) B(i, i) += ak;
    }
    return p;
}

Spectrum poly_roots(const PolyCoeffs& p, const SolveOptions& opts) {
    p.validate();
    const std::size_t d = p.degree();

    Spectrum out;
    if (d == 1) {
        out.eigenvalues = {-p.coeffs[0]};
        out.residuals = {scaled_residual(p, out.eigenvalues[0])};
        return out;
    }

    // initial guesses: roots of unity at the Cauchy bound, seeded jitter
    double cauchy = 0.0;
    for (std::size_t i = 0; i < d; ++i) cauchy = std::max(cauchy, std::abs(p.coeffs[i]));
    const double rho = 1.0 + cauchy;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    std::vector<Cx> z(d);
    for (std::size_t k = 0; k < d; ++k) {
        const double ang = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                           static_cast<double>(d);
        const Cx j{1.0 + 1e-3 * jitter(rng), 1e-3 * jitter(rng)};
        z[k] = rho * std::polar(1.0, ang) * j;
    }

    double best_worst = std::numeric_limits<double>::infinity();
    std::vector<Cx> best = z;
    int stagnant = 0;
    for (int it = 0; it < kAberthMaxIter; ++it) {
        double max_step = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const Cx pk = p.eval(z[k]);
            Cx dpk = p.eval_derivative(z[k]);
            if (dpk == Cx{0.0, 0.0}) dpk = Cx{1e-300, 0.0};
            const Cx newton = pk / dpk;
            Cx sum{0.0, 0.0};
            for (std::size_t j2 = 0; j2 < d; ++j2) {
                if (j2 == k) continue;
                sum += 1.0 / (z[k] - z[j2]);
            }
            Cx denom = 1.0 - newton * sum;
            if (denom == Cx{0.0, 0.0}) denom = Cx{1e-300, 0.0};
            const Cx step = newton / denom;
            z[k] -= step;
            max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[k])));
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, scaled_residual(p, z[k]));
        if (worst < best_worst) {
            best_worst = worst;
            best = z;
            stagnant = 0;
        } else if (++stagnant > 20) {
            break; // multiple-root limit cycle; best iterate is as good as it gets
        }
        if (max_step < 1e-13) break;
    }

    double worst = 0.0;
    out.eigenvalues = best;
    out.residuals.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        out.residuals[k] = scaled_residual(p, best[k]);
        worst = std::max(worst, out.residuals[k]);
    }
    if (worst > kAberthResidualTol) {
        std::size_t bad = 0;
        for (std::size_t k = 1; k < d; ++k)
            if (out.residuals[k] > out.residuals[bad]) bad = k;
        throw PolyRootFailure("Aberth iteration did not converge", best[bad],
                              out.residuals[bad]);
    }
    return out;
}

Spectrum eigenvalues_general(const ComplexMatrix& m, const SolveOptions& opts) {
    return poly_roots(char_poly(m), opts);
}

Cx discriminant(const MatrixFamily& f, Cx lambda, const SolveOptions& opts) {
    const Spectrum s = eigenvalues_general(build_general(f, lambda), opts);
    Cx d{1.0, 0.0};
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            const Cx diff = s.eigenvalues[i] - s.eigenvalues[j];
            d *= diff * diff;
        }
    return d;
}

Cx theta_angle(const TwoLevelParams& p, Cx lambda, Sheet sheet) {
    const ComplexMatrix h = build_two_level(p, lambda);
    const Cx hd = h(0, 0) - h(1, 1);
    const Cx radicand = (hd / 2.0) * (hd / 2.0) + h(0, 1) * h(1, 0);
    const Cx two_r = 2.0 * std::sqrt(radicand);
    // the radicand carries O(eps * scale^2) rounding, so at an exact EP the
    // computed gap floors near sqrt(eps) * scale
    const double coal_floor = 1e-7 * (1.0 + h.max_abs());
    if (std::abs(two_r) < coal_floor)
        throw CoalescenceError("theta_angle: eigenvalues coalesce (exceptional point)");

    const Cx num = 2.0 * h(0, 1);
    const Cx den = (sheet == Sheet::plus ? two_r : -two_r) + hd;
    const double scale = 1.0 + std::abs(hd) + std::abs(two_r) + std::abs(num);
    if (std::abs(den) <= 1e-12 * scale)
        return Cx{std::numbers::pi / 2.0, 0.0}; // pole of the tangent
    return std::atan(num / den);
}

EigenVectors2 eigenvectors_2x2(const TwoLevelParams& p, Cx lambda, Sheet sheet) {
    const Cx theta = theta_angle(p, lambda, sheet);
    const Cx c = std::cos(theta), s = std::sin(theta);
    return {{c, s}, {-s, c}};
}

EigvecResult eigenvector_general(const ComplexMatrix& m, Cx e, const SolveOptions& opts) {
    const std::size_t n = m.dim();
    if (n < 2) throw InvalidInput("eigenvector_general: dimension must be >= 2");
    if (!is_finite(e)) throw InvalidInput("eigenvector_general: shift must be finite");

    ComplexMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= e;
    const LuFactors lu(shifted);

    const double scale = 1.0 + m.frobenius_norm();
    const double tol = 1e-8 * scale;

    auto iterate = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<Cx> v(n);
        for (auto& x : v) x = Cx{u(rng), u(rng)};
        double res = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 5; ++it) {
            std::vector<Cx> w = lu.solve(v);
            double norm = 0.0;
            for (const auto& x : w) norm += std::norm(x);
            norm = std::sqrt(norm);
            if (!(norm > 0.0) || !std::isfinite(norm)) break;
            for (auto& x : w) x /= norm;
            std::vector<Cx> mv = m.apply(w);
            res = 0.0;
            for (std::size_t i = 0; i < n; ++i) res += std::norm(mv[i] - e * w[i]);
            res = std::sqrt(res);
            v = w;
            if (res < tol) break;
        }
        return std::make_pair(v, res);
    };

    auto [v1, res1] = iterate(opts.seed * 0x9e3779b97f4a7c15ULL + 1);
    if (res1 > tol)
        throw InvalidShift("eigenvector_general: shift is not near the spectrum (residual " +
                           std::to_string(res1) + ")");

    // second start probes whether the null direction is well determined
    auto [v2, res2] = iterate(opts.seed * 0x9e3779b97f4a7c15ULL + 2);
    Cx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) overlap += std::conj(v1[i]) * v2[i];
    const bool ill = res2 > tol || std::abs(overlap) < 1.0 - 1e-8;

    return {v1, res1, ill};
}

} // namespace epscope
