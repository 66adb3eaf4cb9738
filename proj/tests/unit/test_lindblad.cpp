#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "permsym/density_matrix.hpp"
#include "permsym/dopri5.hpp"
#include "permsym/kernels.hpp"
#include "permsym/lindblad.hpp"
#include "permsym/models.hpp"
#include "permsym/second_quantization.hpp"
#include "permsym/units.hpp"

using namespace permsym;

namespace {

RowMatrix row_major(const Eigen::MatrixXcd& m) { return m; }

// Two blocks {0,1,2} and {3,4}; the jump maps the first into the second.
struct TwoBlockProblem {
    SparseOperator h;
    std::vector<SparseOperator> c;
    Eigen::MatrixXcd rho;
};

TwoBlockProblem two_block_problem(std::mt19937& rng) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(5, 5);
    h.block(0, 0, 3, 3) = testing::random_hermitian(rng, 3);
    h.block(3, 3, 2, 2) = testing::random_hermitian(rng, 2);
    Eigen::MatrixXcd jump = Eigen::MatrixXcd::Zero(5, 5);
    jump.block(3, 0, 2, 3) = 0.5 * testing::random_matrix(rng, 2, 3);
    Eigen::MatrixXcd dephase = Eigen::MatrixXcd::Zero(5, 5);
    dephase.block(3, 3, 2, 2) = 0.3 * testing::random_hermitian(rng, 2);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(5, 5);
    rho.block(0, 0, 3, 3) = 0.6 * testing::random_density(rng, 3);
    rho.block(3, 3, 2, 2) = 0.4 * testing::random_density(rng, 2);
    return {SparseOperator::from_dense(h), {SparseOperator::from_dense(jump), SparseOperator::from_dense(dephase)}, rho};
}

}  // namespace

TEST_CASE("spmm kernels against dense products") {
    std::mt19937 rng(1);
    const Eigen::MatrixXcd a = testing::sparsify(rng, testing::random_matrix(rng, 9, 7), 0.3, false);
    std::vector<Triplet> trip;
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 7; ++c) {
            if (a(r, c) != cplx(0.0)) {
                trip.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), a(r, c)});
            }
        }
    }
    const auto m = CsrMatrix::from_triplets(9, 7, trip);
    const RowMatrix x = row_major(testing::random_matrix(rng, 7, 5));
    RowMatrix y = row_major(testing::random_matrix(rng, 9, 5));
    const RowMatrix y0 = y;
    const cplx alpha(0.3, -1.2);

    kernels::spmm(m, x.data(), y.data(), 5, alpha, false);
    CHECK(testing::max_diff(y, alpha * a * x) < 1e-13);
    RowMatrix y2 = y0;
    kernels::spmm_serial(m, x.data(), y2.data(), 5, alpha, true);
    CHECK(testing::max_diff(y2, y0 + alpha * a * x) < 1e-13);

    // out += Z A^dag with Z of 4 x 7
    const RowMatrix z = row_major(testing::random_matrix(rng, 4, 7));
    RowMatrix out = row_major(testing::random_matrix(rng, 4, 9));
    const RowMatrix out0 = out;
    kernels::multiply_adjoint(z.data(), 4, m, out.data());
    CHECK(testing::max_diff(out, out0 + z * a.adjoint()) < 1e-13);
}

TEST_CASE("add_with_adjoint and hermitize on small and tiled sizes") {
    std::mt19937 rng(2);
    for (int n : {1, 5, 17, 300}) {
        const RowMatrix w = row_major(testing::random_matrix(rng, n, n));
        RowMatrix out(n, n);
        kernels::add_with_adjoint(w.data(), static_cast<std::size_t>(n), out.data());
        CHECK(testing::max_diff(out, w + w.adjoint()) < 1e-13);
        RowMatrix h = w;
        kernels::hermitize(h.data(), static_cast<std::size_t>(n));
        CHECK(testing::max_diff(h, 0.5 * (w + w.adjoint())) < 1e-13);
        CHECK(kernels::hermiticity_error(h.data(), static_cast<std::size_t>(n)) == 0.0);
    }
}

TEST_CASE("blocked right-hand side equals the dense reference generator") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = two_block_problem(rng);
        for (bool center : {false, true}) {
            LindbladSystem::Options opts;
            opts.center_blocks = center;
            const LindbladSystem sys(p.h, p.c, opts);
            REQUIRE(sys.partition().num_blocks() == 2);
            const auto rho = DensityMatrix::from_dense(sys.partition_ptr(), p.rho);
            const Eigen::MatrixXcd expected = reference::lindblad_rhs(p.h, p.c, p.rho) / hbar_ev_fs;
            CHECK(testing::max_diff(sys.rhs(rho).to_dense(), expected) < 1e-12);

            // non-Hermitian input goes through the X + iY split
            Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(5, 5);
            skew.block(0, 0, 3, 3) = testing::random_matrix(rng, 3, 3);
            skew.block(3, 3, 2, 2) = testing::random_matrix(rng, 2, 2);
            const auto nh = DensityMatrix::from_dense(sys.partition_ptr(), skew);
            CHECK(testing::max_diff(sys.rhs(nh).to_dense(), reference::lindblad_rhs(p.h, p.c, skew) / hbar_ev_fs) <
                  1e-12);
        }
    }
}

TEST_CASE("single-block system against the reference on a random dense problem") {
    std::mt19937 rng(9);
    const int n = 6;
    const auto h = SparseOperator::from_dense(testing::random_hermitian(rng, n));
    std::vector<SparseOperator> c = {SparseOperator::from_dense(0.4 * testing::random_matrix(rng, n, n)),
                                     SparseOperator::from_dense(0.2 * testing::random_matrix(rng, n, n))};
    const LindbladSystem sys(h, c);
    const Eigen::MatrixXcd rho = testing::random_density(rng, n);
    const auto dm = DensityMatrix::from_dense(sys.partition_ptr(), rho);
    CHECK(testing::max_diff(sys.rhs(dm).to_dense(), reference::lindblad_rhs(h, c, rho) / hbar_ev_fs) < 1e-12);

    // serial and threaded evaluation agree exactly enough
    RhsWorkspace ws = sys.make_workspace();
    std::vector<cplx> a(dm.data().begin(), dm.data().end());
    std::vector<cplx> o1(a.size());
    std::vector<cplx> o2(a.size());
    sys.rhs_hermitian(a, o1, ws);
    sys.rhs_hermitian_serial(a, o2, ws);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(o1[k] - o2[k]) < 1e-14);
    }
}

TEST_CASE("non-Hermitian Hamiltonian is rejected") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(LindbladSystem(SparseOperator::from_dense(h), {}), std::invalid_argument);
}

TEST_CASE("reachable blocks follow jumps only downhill") {
    std::mt19937 rng(4);
    const auto p = two_block_problem(rng);
    const LindbladSystem sys(p.h, p.c);
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(5, 5);
    lower(3, 3) = 1.0;
    auto act = sys.reachable_blocks(DensityMatrix::from_dense(sys.partition_ptr(), lower));
    CHECK(act.blocks == std::vector<std::size_t>{1});
    CHECK(act.storage == 4);
    Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(5, 5);
    upper(0, 0) = 1.0;
    act = sys.reachable_blocks(DensityMatrix::from_dense(sys.partition_ptr(), upper));
    CHECK(act.blocks == std::vector<std::size_t>{0, 1});
    CHECK(act.storage == 13);
}

TEST_CASE("Dormand-Prince on a linear oscillator with dense output") {
    const double omega = 2.3;
    Dopri5Options opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-12;
    Dopri5 solver(2, opts);
    std::vector<cplx> y = {1.0, cplx(0.0, 1.0)};
    auto rhs = [&](double, std::span<const cplx> v, std::span<cplx> d) {
        d[0] = cplx(0.0, -omega) * v[0];
        d[1] = -0.5 * v[1];
    };
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) {
        times.push_back(0.25 * i);
    }
    double worst = 0.0;
    auto observe = [&](std::size_t, double t, std::span<const cplx> v) {
        worst = std::max(worst, std::abs(v[0] - std::exp(cplx(0.0, -omega * t))));
        worst = std::max(worst, std::abs(v[1] - cplx(0.0, std::exp(-0.5 * t))));
    };
    const auto stats = solver.integrate(rhs, y, 0.0, times, observe);
    CHECK(worst < 1e-8);
    CHECK(stats.accepted > 0);
    CHECK(stats.rhs_evaluations >= 6 * stats.accepted);
}

TEST_CASE("integration failure on a non-finite right-hand side") {
    Dopri5 solver(1);
    std::vector<cplx> y = {1.0};
    auto rhs = [](double, std::span<const cplx>, std::span<cplx> d) { d[0] = std::nan(""); };
    const std::vector<double> times = {0.0, 1.0};
    CHECK_THROWS_AS(solver.integrate(rhs, y, 0.0, times, [](std::size_t, double, std::span<const cplx>) {}),
                    NumericalError);
}

TEST_CASE("resonant single-emitter vacuum Rabi oscillation") {
    auto spec = default_spec(ModelKind::tc, 1);
    spec.gamma_c = 0.0;
    spec.g = 0.05;
    spec.t_max_fs = 60.0;
    spec.n_samples = 61;
    const Model m = build_model(spec);
    const auto sys = make_system(m);
    EvolveOptions o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-12;
    const auto grid = time_grid(spec);
    const auto tr = evolve(sys, initial_state(m, sys), grid, m.observables, o);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // P_e = cos^2(g t / hbar)
        const double c = std::cos(spec.g * grid[i] / hbar_ev_fs);
        CHECK(std::abs(tr["excited_population"][i] - c * c) < 1e-8);
        CHECK(std::abs(tr["cavity_population"][i] - (1.0 - c * c)) < 1e-8);
    }
    CHECK(tr.max_trace_error() < 1e-12);
    CHECK(tr.warnings.empty());
}

TEST_CASE("cavity photon decays exponentially") {
    const auto mode = boson_mode(3);
    const double gamma = 0.2;
    const LindbladSystem sys(scale(mode.n, 1.3), {scale(mode.a, std::sqrt(gamma))});
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(3, 3);
    rho(1, 1) = 1.0;
    const auto r0 = DensityMatrix::from_dense(sys.partition_ptr(), rho);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) {
        grid.push_back(2.0 * i);
    }
    const std::vector<NamedOperator> obs = {{"n", mode.n}};
    EvolveOptions o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-13;
    const auto tr = evolve(sys, r0, grid, obs, o);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(tr["n"][i] - std::exp(-gamma * grid[i] / hbar_ev_fs)) < 1e-9);
    }
    CHECK(tr.min_sampled_eigenvalue() > -1e-12);
}

TEST_CASE("block centering does not change the trajectory") {
    auto spec = default_spec(ModelKind::tc, 3);
    spec.t_max_fs = 40.0;
    spec.n_samples = 21;
    const Model m = build_model(spec);
    const auto a = make_system(m, true);
    const auto b = make_system(m, false);
    const auto ta = evolve(a, initial_state(m, a), time_grid(spec), m.observables);
    const auto tb = evolve(b, initial_state(m, b), time_grid(spec), m.observables);
    for (std::size_t k = 0; k < ta.names.size(); ++k) {
        for (std::size_t i = 0; i < ta.size(); ++i) {
            CHECK(std::abs(ta.series[k][i] - tb.series[k][i]) < 1e-8);
        }
    }
}

TEST_CASE("evolve validates its inputs") {
    auto spec = default_spec(ModelKind::tc, 1);
    const Model m = build_model(spec);
    const auto sys = make_system(m);
    const auto r0 = initial_state(m, sys);
    const std::vector<double> decreasing = {0.0, 2.0, 1.0};
    CHECK_THROWS_AS(evolve(sys, r0, decreasing, m.observables), std::invalid_argument);
    const std::vector<double> negative = {-1.0, 1.0};
    CHECK_THROWS_AS(evolve(sys, r0, negative, m.observables), std::invalid_argument);
    const std::vector<double> empty;
    CHECK_THROWS_AS(evolve(sys, r0, empty, m.observables), std::invalid_argument);
    const std::vector<NamedOperator> wrong = {{"x", SparseOperator::identity(sys.dim() + 1)}};
    const std::vector<double> ok = {0.0, 1.0};
    CHECK_THROWS_AS(evolve(sys, r0, ok, wrong), std::invalid_argument);
}
