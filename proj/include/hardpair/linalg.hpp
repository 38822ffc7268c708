// linalg.hpp - dense helpers: tiny linear solves and a one-sided Jacobi SVD.
#pragma once

#include <cstddef>
#include <vector>

#include "hardpair/vec.hpp"

namespace hardpair {

// Solve a 3x3 system in place (partial pivoting). Returns false if singular.
bool solve3(double A[3][3], double b[3], double x[3]);

// Row-major dense matrix of modest size (tens of rows/columns).
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Thin SVD via one-sided Jacobi rotations on the columns of A (works for any
// rows >= 1; columns of A are orthogonalized directly, so no A^T A squaring
// and the small singular values stay trustworthy).
// sigma is sorted descending; V has size cols x cols with matching column
// order, A = U diag(sigma) V^T.
struct SvdResult {
    std::vector<double> sigma;
    Matrix V;
};
SvdResult jacobi_svd(Matrix A);

}  // namespace hardpair
