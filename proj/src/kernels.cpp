#include "permsym/kernels.hpp"

#include <algorithm>

namespace permsym::kernels {

namespace {

// out += (ar + i ai) * x over len complex entries, on interleaved doubles so the
// compiler vectorizes it without the NaN-recovery path of std::complex multiply
inline void axpy(double ar, double ai, const double* __restrict x, double* __restrict out, std::size_t len) {
    for (std::size_t j = 0; j < len; ++j) {
        const double xr = x[2 * j];
        const double xi = x[2 * j + 1];
        out[2 * j] += ar * xr - ai * xi;
        out[2 * j + 1] += ar * xi + ai * xr;
    }
}

inline void spmm_row(const CsrMatrix& a, std::size_t r, const cplx* x, cplx* y, std::size_t ncols, cplx alpha,
                     bool accumulate) {
    auto* out = reinterpret_cast<double*>(y + r * ncols);
    if (!accumulate) {
        std::fill(out, out + 2 * ncols, 0.0);
    }
    auto rp = a.row_ptr();
    auto ci = a.col_idx();
    auto v = a.values();
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
        const cplx f = alpha * v[k];
        axpy(f.real(), f.imag(), reinterpret_cast<const double*>(x + ci[k] * ncols), out, ncols);
    }
}

constexpr std::size_t tile = 16;
constexpr std::size_t wide_tile = 64;

// out = w + w^dag on the tile pair (r0.., c0..) with c0 > r0 or on a diagonal tile
inline void add_adjoint_tile(const cplx* w, std::size_t n, cplx* out, std::size_t r0, std::size_t r1,
                             std::size_t c0, std::size_t c1) {
    for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = std::max(c0, r); c < c1; ++c) {
            const cplx s = w[r * n + c] + std::conj(w[c * n + r]);
            out[r * n + c] = s;
            out[c * n + r] = std::conj(s);
        }
    }
}

// Large blocks: conj-transpose the mirror tile into a contiguous buffer first
// so the sum runs over unit-stride rows, then mirror the result.
void add_adjoint_wide(const cplx* w, std::size_t n, cplx* out, std::size_t r0, std::size_t r1, std::size_t c0,
                      std::size_t c1) {
    alignas(64) double buf[2 * wide_tile * wide_tile];
    const std::size_t nr = r1 - r0;
    const std::size_t nc = c1 - c0;
    for (std::size_t c = c0; c < c1; ++c) {
        const auto* src = reinterpret_cast<const double*>(w + c * n + r0);
        for (std::size_t r = 0; r < nr; ++r) {
            buf[2 * (r * wide_tile + (c - c0))] = src[2 * r];
            buf[2 * (r * wide_tile + (c - c0)) + 1] = -src[2 * r + 1];
        }
    }
    for (std::size_t r = r0; r < r1; ++r) {
        const auto* x = reinterpret_cast<const double*>(w + r * n + c0);
        const double* y = buf + 2 * (r - r0) * wide_tile;
        auto* o = reinterpret_cast<double*>(out + r * n + c0);
        for (std::size_t j = 0; j < 2 * nc; ++j) {
            o[j] = x[j] + y[j];
        }
    }
    for (std::size_t c = c0; c < c1; ++c) {
        auto* o = reinterpret_cast<double*>(out + c * n + r0);
        for (std::size_t r = r0; r < r1; ++r) {
            const auto* u = reinterpret_cast<const double*>(out + r * n + c);
            o[2 * (r - r0)] = u[0];
            o[2 * (r - r0) + 1] = -u[1];
        }
    }
}

}  // namespace

void spmm(const CsrMatrix& a, const cplx* x, cplx* y, std::size_t ncols, cplx alpha, bool accumulate) {
    const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(dynamic, 8) if (a.nnz() * ncols > 65536)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        spmm_row(a, static_cast<std::size_t>(r), x, y, ncols, alpha, accumulate);
    }
}

void spmm_serial(const CsrMatrix& a, const cplx* x, cplx* y, std::size_t ncols, cplx alpha, bool accumulate) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
        spmm_row(a, r, x, y, ncols, alpha, accumulate);
    }
}

void multiply_adjoint(const cplx* z, std::size_t rows, const CsrMatrix& c, cplx* out, bool parallel) {
    const std::size_t zc = c.cols();
    const std::size_t oc = c.rows();
    auto rp = c.row_ptr();
    auto ci = c.col_idx();
    auto v = c.values();
#pragma omp parallel for schedule(static) if (parallel && rows * c.nnz() > 65536)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
        const cplx* zr = z + static_cast<std::size_t>(r) * zc;
        cplx* o = out + static_cast<std::size_t>(r) * oc;
        for (std::size_t j = 0; j < oc; ++j) {
            double sr = 0.0;
            double si = 0.0;
            for (std::size_t k = rp[j]; k < rp[j + 1]; ++k) {
                // z * conj(v)
                const cplx zz = zr[ci[k]];
                sr += zz.real() * v[k].real() + zz.imag() * v[k].imag();
                si += zz.imag() * v[k].real() - zz.real() * v[k].imag();
            }
            o[j] += cplx(sr, si);
        }
    }
}

void add_with_adjoint(const cplx* w, std::size_t n, cplx* out, bool parallel) {
    const bool wide = n >= 4 * wide_tile;
    const std::size_t t = wide ? wide_tile : tile;
    const auto tiles = static_cast<std::ptrdiff_t>((n + t - 1) / t);
#pragma omp parallel for schedule(dynamic, 1) if (parallel && n * n > 65536)
    for (std::ptrdiff_t bt = 0; bt < tiles; ++bt) {
        const std::size_t r0 = static_cast<std::size_t>(bt) * t;
        const std::size_t r1 = std::min(n, r0 + t);
        // tiles on and above the diagonal; each pair (r, c), (c, r) written once
        for (std::size_t c0 = r0; c0 < n; c0 += t) {
            const std::size_t c1 = std::min(n, c0 + t);
            if (wide && c0 != r0) {
                add_adjoint_wide(w, n, out, r0, r1, c0, c1);
            } else {
                add_adjoint_tile(w, n, out, r0, r1, c0, c1);
            }
        }
    }
}

void hermitize(cplx* a, std::size_t n) {
    for (std::size_t r = 0; r < n; ++r) {
        a[r * n + r] = cplx(a[r * n + r].real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c) {
            const cplx s = 0.5 * (a[r * n + c] + std::conj(a[c * n + r]));
            a[r * n + c] = s;
            a[c * n + r] = std::conj(s);
        }
    }
}

double hermiticity_error(const cplx* a, std::size_t n) {
    double err = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
            err = std::max(err, std::abs(a[r * n + c] - std::conj(a[c * n + r])));
        }
    }
    return err;
}

}  // namespace permsym::kernels
