#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "permsym/sparse_operator.hpp"

namespace testing {

using permsym::cplx;

inline double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline cplx random_cplx(std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng), n(rng)};
}

inline Eigen::MatrixXcd random_matrix(std::mt19937& rng, int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = random_cplx(rng);
        }
    }
    return m;
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937& rng, int n) {
    const Eigen::MatrixXcd m = random_matrix(rng, n, n);
    return 0.5 * (m + m.adjoint());
}

/// Positive, unit trace.
inline Eigen::MatrixXcd random_density(std::mt19937& rng, int n) {
    const Eigen::MatrixXcd m = random_matrix(rng, n, n);
    Eigen::MatrixXcd rho = m * m.adjoint();
    return rho / rho.trace();
}

/// Keeps each entry with probability p (symmetrically for Hermitian input).
inline Eigen::MatrixXcd sparsify(std::mt19937& rng, Eigen::MatrixXcd m, double p, bool hermitian) {
    std::bernoulli_distribution keep(p);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = hermitian ? r : 0; c < m.cols(); ++c) {
            if (!keep(rng)) {
                m(r, c) = 0.0;
                if (hermitian) {
                    m(c, r) = 0.0;
                }
            }
        }
    }
    return m;
}

}  // namespace testing
