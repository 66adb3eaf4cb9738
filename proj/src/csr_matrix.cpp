#include "permsym/csr_matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace permsym {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) {
            throw std::out_of_range("CsrMatrix::from_triplets: entry outside matrix bounds");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    CsrMatrix m(rows, cols);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::vector<std::size_t> counts(rows, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        const std::size_t r = triplets[i].row;
        const std::size_t c = triplets[i].col;
        cplx sum = 0.0;
        for (; i < triplets.size() && triplets[i].row == r && triplets[i].col == c; ++i) {
            sum += triplets[i].value;
        }
        if (sum != cplx(0.0)) {
            m.col_idx_.push_back(c);
            m.values_.push_back(sum);
            ++counts[r];
        }
    }
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_ptr_[r + 1] = m.row_ptr_[r] + counts[r];
    }
    return m;
}

cplx CsrMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
        throw std::out_of_range("CsrMatrix::at: index out of range");
    }
    auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<Triplet> CsrMatrix::triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            out.push_back({r, col_idx_[k], values_[k]});
        }
    }
    return out;
}

Eigen::MatrixXcd CsrMatrix::to_dense() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col_idx_[k])) = values_[k];
        }
    }
    return d;
}

CsrMatrix CsrMatrix::adjoint() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            t.push_back({col_idx_[k], r, std::conj(values_[k])});
        }
    }
    return from_triplets(cols_, rows_, std::move(t));
}

CsrMatrix CsrMatrix::scaled(cplx factor) const {
    if (factor == cplx(0.0)) {
        return CsrMatrix(rows_, cols_);
    }
    CsrMatrix m = *this;
    for (auto& v : m.values_) {
        v *= factor;
    }
    return m;
}

namespace {

CsrMatrix combine(const CsrMatrix& a, const CsrMatrix& b, double sign) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("CsrMatrix: dimension mismatch in addition");
    }
    auto t = a.triplets();
    for (auto e : b.triplets()) {
        e.value *= sign;
        t.push_back(e);
    }
    return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

}  // namespace

CsrMatrix operator+(const CsrMatrix& a, const CsrMatrix& b) { return combine(a, b, 1.0); }
CsrMatrix operator-(const CsrMatrix& a, const CsrMatrix& b) { return combine(a, b, -1.0); }

CsrMatrix operator*(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("CsrMatrix: dimension mismatch in product");
    }
    auto arp = a.row_ptr();
    auto aci = a.col_idx();
    auto av = a.values();
    auto brp = b.row_ptr();
    auto bci = b.col_idx();
    auto bv = b.values();

    std::vector<Triplet> t;
    std::unordered_map<std::size_t, cplx> acc;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        acc.clear();
        for (std::size_t k = arp[r]; k < arp[r + 1]; ++k) {
            const std::size_t mid = aci[k];
            for (std::size_t l = brp[mid]; l < brp[mid + 1]; ++l) {
                acc[bci[l]] += av[k] * bv[l];
            }
        }
        for (const auto& [c, v] : acc) {
            t.push_back({r, c, v});
        }
    }
    return CsrMatrix::from_triplets(a.rows(), b.cols(), std::move(t));
}

double max_abs(const CsrMatrix& a) {
    double m = 0.0;
    for (const auto& v : a.values()) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double max_abs_diff(const CsrMatrix& a, const CsrMatrix& b) {
    return max_abs(a - b);
}

}  // namespace permsym
