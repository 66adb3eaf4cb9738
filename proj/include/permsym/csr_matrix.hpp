#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace permsym {

using cplx = std::complex<double>;
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Triplet {
    std::size_t row;
    std::size_t col;
    cplx value;
};

/**
 * Rectangular complex matrix in compressed-row layout with sorted column
 * indices and no stored exact zeros.
 */
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t rows, std::size_t cols);

    /// Duplicates are summed; entries that sum to exactly zero are dropped.
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
    std::span<const cplx> values() const noexcept { return values_; }

    cplx at(std::size_t r, std::size_t c) const;

    std::vector<Triplet> triplets() const;
    Eigen::MatrixXcd to_dense() const;

    CsrMatrix adjoint() const;
    CsrMatrix scaled(cplx factor) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<cplx> values_;
};

CsrMatrix operator+(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix operator-(const CsrMatrix& a, const CsrMatrix& b);
CsrMatrix operator*(const CsrMatrix& a, const CsrMatrix& b);

double max_abs(const CsrMatrix& a);
double max_abs_diff(const CsrMatrix& a, const CsrMatrix& b);

}  // namespace permsym
