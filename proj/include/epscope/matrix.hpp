#pragma once

#include <vector>
#include <cstddef>
#include <initializer_list>

#include "epscope/types.hpp"

namespace epscope {

/// Dense square complex matrix, row-major. Sizes in this project stay small
/// (n <= 12), so everything is done densely and by value.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), a_(n * n, Cx{0.0, 0.0}) {}
    ComplexMatrix(std::size_t n, std::initializer_list<Cx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n); }
    static ComplexMatrix diagonal(const std::vector<Cx>& d);

    std::size_t dim() const { return n_; }

    Cx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Cx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Cx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Cx s, ComplexMatrix a) { return a *= s; }

    ComplexMatrix matmul(const ComplexMatrix& o) const;
    ComplexMatrix transpose() const;

    Cx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool finite() const;

    std::vector<Cx> apply(const std::vector<Cx>& v) const;

private:
    std::size_t n_ = 0;
    std::vector<Cx> a_;
};

/// LU factorization with partial pivoting. Exact zero pivots are replaced by
/// a tiny value scaled to the matrix so that inverse iteration with a shift
/// sitting on an eigenvalue still produces a usable solve.
class LuFactors {
public:
    explicit LuFactors(const ComplexMatrix& m);

    Cx determinant() const;
    std::vector<Cx> solve(std::vector<Cx> b) const;
    std::size_t dim() const { return lu_.dim(); }

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
};

Cx determinant(const ComplexMatrix& m);

} // namespace epscope
