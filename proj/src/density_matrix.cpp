#include "permsym/density_matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "permsym/kernels.hpp"

namespace permsym {

DensityMatrix::DensityMatrix(std::shared_ptr<const BlockPartition> partition) : partition_(std::move(partition)) {
    if (!partition_) {
        throw std::invalid_argument("DensityMatrix: null partition");
    }
    data_.assign(partition_->storage_size(), cplx(0.0));
}

DensityMatrix DensityMatrix::from_pure(std::shared_ptr<const BlockPartition> partition, const Eigen::VectorXcd& psi) {
    DensityMatrix rho(std::move(partition));
    const auto& p = *rho.partition_;
    if (static_cast<std::size_t>(psi.size()) != p.dim()) {
        throw std::invalid_argument("DensityMatrix::from_pure: state dimension mismatch");
    }
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0)) {
        throw std::invalid_argument("DensityMatrix::from_pure: zero state");
    }
    std::size_t block = p.num_blocks();
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (psi(i) == cplx(0.0)) {
            continue;
        }
        const std::size_t b = p.block_of(static_cast<std::size_t>(i));
        if (block != p.num_blocks() && block != b) {
            throw std::invalid_argument("DensityMatrix::from_pure: state couples different blocks of the partition");
        }
        block = b;
    }
    auto m = rho.block(block);
    auto members = p.members(block);
    for (std::size_t r = 0; r < members.size(); ++r) {
        for (std::size_t c = 0; c < members.size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                psi(static_cast<Eigen::Index>(members[r])) * std::conj(psi(static_cast<Eigen::Index>(members[c]))) /
                norm2;
        }
    }
    return rho;
}

DensityMatrix DensityMatrix::from_dense(std::shared_ptr<const BlockPartition> partition, const Eigen::MatrixXcd& dense) {
    DensityMatrix rho(std::move(partition));
    const auto& p = *rho.partition_;
    if (static_cast<std::size_t>(dense.rows()) != p.dim() || dense.rows() != dense.cols()) {
        throw std::invalid_argument("DensityMatrix::from_dense: dimension mismatch");
    }
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
        for (Eigen::Index c = 0; c < dense.cols(); ++c) {
            const auto i = static_cast<std::size_t>(r);
            const auto j = static_cast<std::size_t>(c);
            if (p.block_of(i) == p.block_of(j)) {
                rho.block(p.block_of(i))(static_cast<Eigen::Index>(p.local_index(i)),
                                         static_cast<Eigen::Index>(p.local_index(j))) = dense(r, c);
            } else if (dense(r, c) != cplx(0.0)) {
                throw std::invalid_argument("DensityMatrix::from_dense: coherence between different blocks");
            }
        }
    }
    return rho;
}

DensityMatrix::BlockMap DensityMatrix::block(std::size_t b) {
    const auto n = static_cast<Eigen::Index>(partition_->block_size(b));
    return BlockMap(data_.data() + partition_->offset(b), n, n);
}

DensityMatrix::ConstBlockMap DensityMatrix::block(std::size_t b) const {
    const auto n = static_cast<Eigen::Index>(partition_->block_size(b));
    return ConstBlockMap(data_.data() + partition_->offset(b), n, n);
}

cplx DensityMatrix::entry(std::size_t i, std::size_t j) const {
    const auto& p = *partition_;
    if (i >= p.dim() || j >= p.dim()) {
        throw std::out_of_range("DensityMatrix::entry: index out of range");
    }
    if (p.block_of(i) != p.block_of(j)) {
        return 0.0;
    }
    return block(p.block_of(i))(static_cast<Eigen::Index>(p.local_index(i)), static_cast<Eigen::Index>(p.local_index(j)));
}

cplx DensityMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t b = 0; b < partition_->num_blocks(); ++b) {
        t += block(b).trace();
    }
    return t;
}

double DensityMatrix::hermiticity_error() const {
    double err = 0.0;
    for (std::size_t b = 0; b < partition_->num_blocks(); ++b) {
        err = std::max(err, kernels::hermiticity_error(data_.data() + partition_->offset(b), partition_->block_size(b)));
    }
    return err;
}

double DensityMatrix::min_eigenvalue() const {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < partition_->num_blocks(); ++b) {
        const Eigen::MatrixXcd h = 0.5 * (block(b) + block(b).adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("DensityMatrix::min_eigenvalue: eigensolver failed");
        }
        lowest = std::min(lowest, solver.eigenvalues().minCoeff());
    }
    return lowest;
}

void DensityMatrix::hermitize() {
    for (std::size_t b = 0; b < partition_->num_blocks(); ++b) {
        kernels::hermitize(data_.data() + partition_->offset(b), partition_->block_size(b));
    }
}

Eigen::MatrixXcd DensityMatrix::to_dense() const {
    const auto& p = *partition_;
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(p.dim()));
    for (std::size_t b = 0; b < p.num_blocks(); ++b) {
        auto members = p.members(b);
        auto m = block(b);
        for (std::size_t r = 0; r < members.size(); ++r) {
            for (std::size_t c = 0; c < members.size(); ++c) {
                d(static_cast<Eigen::Index>(members[r]), static_cast<Eigen::Index>(members[c])) =
                    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return d;
}

}  // namespace permsym
