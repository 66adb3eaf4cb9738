#include "permsym/sparse_operator.hpp"

#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace permsym {

SparseOperator::SparseOperator(CsrMatrix matrix, std::string basis_tag)
    : matrix_(std::move(matrix)), tag_(std::move(basis_tag)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("SparseOperator: matrix must be square");
    }
}

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::vector<Triplet> triplets, std::string basis_tag) {
    return SparseOperator(CsrMatrix::from_triplets(dim, dim, std::move(triplets)), std::move(basis_tag));
}

SparseOperator SparseOperator::identity(std::size_t dim, std::string basis_tag) {
    std::vector<Triplet> t;
    t.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        t.push_back({i, i, 1.0});
    }
    return from_triplets(dim, std::move(t), std::move(basis_tag));
}

SparseOperator SparseOperator::zero(std::size_t dim, std::string basis_tag) {
    return SparseOperator(CsrMatrix(dim, dim), std::move(basis_tag));
}

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXcd& dense, std::string basis_tag) {
    if (dense.rows() != dense.cols()) {
        throw std::invalid_argument("SparseOperator::from_dense: matrix must be square");
    }
    std::vector<Triplet> t;
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
        for (Eigen::Index c = 0; c < dense.cols(); ++c) {
            if (dense(r, c) != cplx(0.0)) {
                t.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), dense(r, c)});
            }
        }
    }
    return from_triplets(static_cast<std::size_t>(dense.rows()), std::move(t), std::move(basis_tag));
}

namespace {

std::string merged_tag(const SparseOperator& a, const SparseOperator& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
    if (!a.basis_tag().empty() && !b.basis_tag().empty() && a.basis_tag() != b.basis_tag()) {
        throw std::invalid_argument(std::string(what) + ": basis mismatch (" + a.basis_tag() + " vs " +
                                    b.basis_tag() + ")");
    }
    return a.basis_tag().empty() ? b.basis_tag() : a.basis_tag();
}

}  // namespace

SparseOperator add(const SparseOperator& a, const SparseOperator& b) {
    auto tag = merged_tag(a, b, "add");
    return SparseOperator(a.matrix() + b.matrix(), std::move(tag));
}

SparseOperator subtract(const SparseOperator& a, const SparseOperator& b) {
    auto tag = merged_tag(a, b, "subtract");
    return SparseOperator(a.matrix() - b.matrix(), std::move(tag));
}

SparseOperator scale(const SparseOperator& a, cplx factor) {
    return SparseOperator(a.matrix().scaled(factor), a.basis_tag());
}

SparseOperator adjoint(const SparseOperator& a) {
    return SparseOperator(a.matrix().adjoint(), a.basis_tag());
}

SparseOperator matmul(const SparseOperator& a, const SparseOperator& b) {
    auto tag = merged_tag(a, b, "matmul");
    return SparseOperator(a.matrix() * b.matrix(), std::move(tag));
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
    return subtract(matmul(a, b), matmul(b, a));
}

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
    merged_tag(a, b, "max_abs_diff");
    return permsym::max_abs_diff(a.matrix(), b.matrix());
}

double max_abs(const SparseOperator& a) {
    return permsym::max_abs(a.matrix());
}

bool is_hermitian(const SparseOperator& a, double tol) {
    return permsym::max_abs_diff(a.matrix(), a.matrix().adjoint()) <= tol;
}

SparseOperator kron(const SparseOperator& a, const SparseOperator& b) {
    const std::size_t nb = b.dim();
    std::vector<Triplet> t;
    t.reserve(a.nnz() * b.nnz());
    for (const auto& ea : a.matrix().triplets()) {
        for (const auto& eb : b.matrix().triplets()) {
            t.push_back({ea.row * nb + eb.row, ea.col * nb + eb.col, ea.value * eb.value});
        }
    }
    std::string tag;
    if (!a.basis_tag().empty() || !b.basis_tag().empty()) {
        tag = a.basis_tag() + "x" + b.basis_tag();
    }
    return SparseOperator::from_triplets(a.dim() * nb, std::move(t), std::move(tag));
}

void dump(const SparseOperator& a, std::ostream& out) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << "# dim " << a.dim() << " nnz " << a.nnz() << " basis " << (a.basis_tag().empty() ? "-" : a.basis_tag())
        << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& t : a.matrix().triplets()) {
        out << t.row << ' ' << t.col << ' ' << t.value.real() << ' ' << t.value.imag() << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

}  // namespace permsym
