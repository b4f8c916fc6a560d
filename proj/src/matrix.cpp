#include "epscope/matrix.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "epscope/errors.hpp"

namespace epscope {

ComplexMatrix::ComplexMatrix(std::size_t n, std::initializer_list<Cx> entries)
    : n_(n), a_(entries) {
    if (a_.size() != n * n)
        throw InvalidInput("ComplexMatrix: initializer size does not match dimension");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Cx{1.0, 0.0};
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Cx>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (n_ != o.n_) throw InvalidInput("matrix addition: dimension mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (n_ != o.n_) throw InvalidInput("matrix subtraction: dimension mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Cx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::matmul(const ComplexMatrix& o) const {
    if (n_ != o.n_) throw InvalidInput("matmul: dimension mismatch");
    ComplexMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const Cx aik = (*this)(i, k);
            if (aik == Cx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Cx ComplexMatrix::trace() const {
    Cx t{0.0, 0.0};
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

bool ComplexMatrix::finite() const {
    for (const auto& x : a_)
        if (!is_finite(x)) return false;
    return true;
}

std::vector<Cx> ComplexMatrix::apply(const std::vector<Cx>& v) const {
    if (v.size() != n_) throw InvalidInput("matrix apply: dimension mismatch");
    std::vector<Cx> r(n_, Cx{0.0, 0.0});
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

LuFactors::LuFactors(const ComplexMatrix& m) : lu_(m), perm_(m.dim()) {
    const std::size_t n = lu_.dim();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    // replacement for exactly-zero pivots, scaled to the matrix so a shifted
    // solve sitting on an eigenvalue amplifies without overflowing
    const double tiny =
        std::numeric_limits<double>::epsilon() * (1.0 + lu_.max_abs());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(lu_(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(lu_(r, col));
            if (v > best) { best = v; piv = r; }
        }
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(col, j), lu_(piv, j));
            std::swap(perm_[col], perm_[piv]);
            sign_ = -sign_;
        }
        Cx d = lu_(col, col);
        if (d == Cx{0.0, 0.0}) {
            // shifted solve sitting exactly on an eigenvalue: keep it usable
            d = Cx{tiny, 0.0};
            lu_(col, col) = d;
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const Cx f = lu_(r, col) / d;
            lu_(r, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) lu_(r, j) -= f * lu_(col, j);
        }
    }
}

Cx LuFactors::determinant() const {
    Cx d{static_cast<double>(sign_), 0.0};
    for (std::size_t i = 0; i < lu_.dim(); ++i) d *= lu_(i, i);
    return d;
}

std::vector<Cx> LuFactors::solve(std::vector<Cx> b) const {
    const std::size_t n = lu_.dim();
    if (b.size() != n) throw InvalidInput("LU solve: dimension mismatch");
    std::vector<Cx> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

Cx determinant(const ComplexMatrix& m) { return LuFactors(m).determinant(); }

} // namespace epscope
