// linalg.cpp - 3x3 solve and one-sided Jacobi SVD.
#include "hardpair/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hardpair {

bool solve3(double A[3][3], double b[3], double x[3]) {
    int piv[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int p = k;
        for (int i = k + 1; i < 3; ++i)
            if (std::abs(A[piv[i]][k]) > std::abs(A[piv[p]][k])) p = i;
        std::swap(piv[k], piv[p]);
        const double akk = A[piv[k]][k];
        if (std::abs(akk) < 1e-300) return false;
        for (int i = k + 1; i < 3; ++i) {
            const double f = A[piv[i]][k] / akk;
            for (int j = k; j < 3; ++j) A[piv[i]][j] -= f * A[piv[k]][j];
            b[piv[i]] -= f * b[piv[k]];
        }
    }
    for (int k = 2; k >= 0; --k) {
        double s = b[piv[k]];
        for (int j = k + 1; j < 3; ++j) s -= A[piv[k]][j] * x[j];
        x[k] = s / A[piv[k]][k];
    }
    return true;
}

SvdResult jacobi_svd(Matrix A) {
    const std::size_t n = A.rows, m = A.cols;
    Matrix V(m, m);
    for (std::size_t j = 0; j < m; ++j) V(j, j) = 1.0;

    // Rotate column pairs of A to mutual orthogonality; V accumulates the
    // right-hand rotations.
    const double tol = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double u = A(i, p), v = A(i, q);
                    app += u * u;
                    aqq += v * v;
                    apq += u * v;
                }
                if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
                for (std::size_t i = 0; i < n; ++i) {
                    const double u = A(i, p), v = A(i, q);
                    A(i, p) = c * u - s * v;
                    A(i, q) = s * u + c * v;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double u = V(i, p), v = V(i, q);
                    V(i, p) = c * u - s * v;
                    V(i, q) = s * u + c * v;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += A(i, j) * A(i, j);
        sigma[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult r;
    r.sigma.resize(m);
    r.V = Matrix(m, m);
    for (std::size_t j = 0; j < m; ++j) {
        r.sigma[j] = sigma[order[j]];
        for (std::size_t i = 0; i < m; ++i) r.V(i, j) = V(i, order[j]);
    }
    return r;
}

}  // namespace hardpair
