#include <stdexcept>

#include "permsym/kernels.hpp"

namespace permsym::reference {

Eigen::MatrixXcd lindblad_rhs(const SparseOperator& hamiltonian, const std::vector<SparseOperator>& collapses,
                              const Eigen::MatrixXcd& rho) {
    const auto n = static_cast<Eigen::Index>(hamiltonian.dim());
    if (rho.rows() != n || rho.cols() != n) {
        throw std::invalid_argument("reference::lindblad_rhs: dimension mismatch");
    }
    const cplx i_unit(0.0, 1.0);
    const Eigen::MatrixXcd h = hamiltonian.to_dense();
    Eigen::MatrixXcd out = -i_unit * (h * rho - rho * h);
    for (const auto& op : collapses) {
        if (op.dim() != hamiltonian.dim()) {
            throw std::invalid_argument("reference::lindblad_rhs: collapse operator dimension mismatch");
        }
        const Eigen::MatrixXcd c = op.to_dense();
        const Eigen::MatrixXcd cdc = c.adjoint() * c;
        out += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
    }
    return out;
}

}  // namespace permsym::reference
