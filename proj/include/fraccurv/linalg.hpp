#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fraccurv/common.hpp"

namespace fraccurv {

// Dense square matrix, row-major.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// Cholesky factor g = L L^T; throws NotPositiveDefinite when any pivot is
// non-positive (equivalent to a leading principal minor <= 0).
inline Mat cholesky(const Mat& g) {
    Mat L(g.n);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(s > 0.0))
                    throw NotPositiveDefinite("metric is not positive definite");
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

// Inverse of a symmetric positive-definite matrix via its Cholesky factor.
inline Mat spd_inverse(const Mat& g) {
    const Mat L = cholesky(g);
    const int n = g.n;
    // Invert lower triangular L.
    Mat Linv(n);
    for (int i = 0; i < n; ++i) {
        Linv(i, i) = 1.0 / L(i, i);
        for (int j = 0; j < i; ++j) {
            double s = 0.0;
            for (int k = j; k < i; ++k) s -= L(i, k) * Linv(k, j);
            Linv(i, j) = s / L(i, i);
        }
    }
    // g^{-1} = L^{-T} L^{-1}.
    Mat inv(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = std::max(i, j); k < n; ++k) s += Linv(k, i) * Linv(k, j);
            inv(i, j) = s;
        }
    return inv;
}

}  // namespace fraccurv
