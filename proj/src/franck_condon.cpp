#include "permsym/franck_condon.hpp"

#include <cmath>
#include <stdexcept>

namespace permsym {

Eigen::MatrixXd franck_condon_table(double lambda_v, double omega_v, int rows, int cols) {
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("franck_condon: vibrational indices must be non-negative");
    }
    if (!(omega_v > 0.0)) {
        throw std::invalid_argument("franck_condon: omega_v must be positive");
    }
    // matrix of the displacement operator D(alpha) with alpha = -lambda/omega,
    // filled by the two-term ladder recursion from <0|D|0> = exp(-alpha^2/2)
    const double alpha = -lambda_v / omega_v;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(rows, cols);
    if (rows == 0 || cols == 0) {
        return f;
    }
    f(0, 0) = std::exp(-0.5 * alpha * alpha);
    for (int n = 1; n < cols; ++n) {
        f(0, n) = -alpha * f(0, n - 1) / std::sqrt(static_cast<double>(n));
    }
    for (int m = 1; m < rows; ++m) {
        for (int n = 0; n < cols; ++n) {
            double v = alpha * f(m - 1, n);
            if (n > 0) {
                v += std::sqrt(static_cast<double>(n)) * f(m - 1, n - 1);
            }
            f(m, n) = v / std::sqrt(static_cast<double>(m));
        }
    }
    return f;
}

double franck_condon(double lambda_v, double omega_v, int nu, int nu_prime) {
    if (nu < 0 || nu_prime < 0) {
        throw std::invalid_argument("franck_condon: vibrational indices must be non-negative");
    }
    return franck_condon_table(lambda_v, omega_v, nu + 1, nu_prime + 1)(nu, nu_prime);
}

}  // namespace permsym
