#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "permsym/franck_condon.hpp"
#include "permsym/full_models.hpp"
#include "permsym/models.hpp"
#include "permsym/second_quantization.hpp"

using namespace permsym;

namespace {

// <m|exp(alpha (a^dag - a))|n> from a large truncated oscillator, exponentiated
// through the eigenvectors of the Hermitian generator i alpha (a^dag - a).
Eigen::MatrixXd displacement_by_diagonalization(double alpha, int rows, int cols) {
    const int big = 80;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(big, big);
    for (int k = 1; k < big; ++k) {
        g(k, k - 1) = cplx(0.0, alpha * std::sqrt(double(k)));
        g(k - 1, k) = cplx(0.0, -alpha * std::sqrt(double(k)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const Eigen::VectorXcd phase = (cplx(0.0, -1.0) * es.eigenvalues().cast<cplx>()).array().exp();
    const Eigen::MatrixXcd d = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    return d.real().topLeftCorner(rows, cols);
}

Trajectory run_model(const ModelSpec& spec) {
    const Model m = build_model(spec);
    const auto sys = make_system(m);
    EvolveOptions o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-12;
    return evolve(sys, initial_state(m, sys), time_grid(spec), m.observables, o);
}

}  // namespace

TEST_CASE("Franck-Condon factors equal displaced-oscillator overlaps") {
    for (auto [lambda, omega] : {std::pair{0.096, 0.182}, std::pair{0.3, 0.2}, std::pair{0.0, 0.1}}) {
        const auto f = franck_condon_table(lambda, omega, 5, 7);
        const auto d = displacement_by_diagonalization(-lambda / omega, 5, 7);
        CHECK((f - d).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(franck_condon(lambda, omega, 3, 2) - d(3, 2)) < 1e-12);
        // Huang-Rhys: F_00 = exp(-S/2), S = (lambda/omega)^2
        const double s = (lambda / omega) * (lambda / omega);
        CHECK(std::abs(f(0, 0) - std::exp(-0.5 * s)) < 1e-15);
    }
    // completeness over the ground ladder
    const auto wide = franck_condon_table(0.096, 0.182, 3, 60);
    for (int r = 0; r < 3; ++r) {
        CHECK(std::abs(wide.row(r).squaredNorm() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(franck_condon(0.1, 0.0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(franck_condon(0.1, 0.2, -1, 0), std::invalid_argument);
}

TEST_CASE("vibronic emitter sector sizes") {
    auto spec = default_spec(ModelKind::htc, 3);
    const Model m = build_model(spec);
    CHECK(m.basis->emitters().size() == 220);
    CHECK(m.basis->size() == 220u * static_cast<std::size_t>(spec.n_cav));
    CHECK(std::abs(spec.omega_c - (3.5 - 2.0 * 0.096 * 0.096 / 0.182)) < 1e-15);
    // weight lost by truncating the excited ladder
    const auto f = franck_condon_table(spec.lambda_v, spec.omega_v, spec.n_vib_excited, 1);
    CHECK(std::abs(m.initial_state_loss - (1.0 - f.squaredNorm())) < 1e-15);
    CHECK(std::abs(m.psi0.norm() - 1.0) < 1e-14);
}

TEST_CASE("vibronic model without vibrations reduces to Tavis-Cummings") {
    auto h = default_spec(ModelKind::htc, 2);
    h.n_vib_ground = 1;
    h.n_vib_excited = 1;
    h.lambda_v = 0.0;
    h.omega_e = 2.0;
    h.omega_c = 2.0;
    h.g = 0.05;
    h.gamma_c = 0.1;
    h.n_cav = 3;
    h.t_max_fs = 50.0;
    h.n_samples = 26;
    auto t = default_spec(ModelKind::tc, 2);
    t.omega_0 = 2.0;
    t.omega_c = 2.0;
    t.g = 0.05;
    t.gamma_c = 0.1;
    t.n_cav = 3;
    t.t_max_fs = 50.0;
    t.n_samples = 26;
    // same matrices once the constant N omega / 2 is taken off
    const Model mh = build_model(h);
    const Model mt = build_model(t);
    const Eigen::MatrixXcd hd = mh.hamiltonian.to_dense();
    const Eigen::MatrixXcd shift = Eigen::MatrixXcd::Identity(hd.rows(), hd.cols()) * (2 * h.omega_e / 2.0);
    CHECK(testing::max_diff(hd - shift, mt.hamiltonian.to_dense()) < 1e-14);
    REQUIRE(mh.collapses.size() == mt.collapses.size());
    CHECK(testing::max_diff(mh.collapses[0].to_dense(), mt.collapses[0].to_dense()) < 1e-15);

    const auto a = run_model(h);
    const auto b = run_model(t);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(2.0 * a["cavity_population_per_molecule"][i] - b["cavity_population"][i]) < 1e-8);
        CHECK(std::abs(2.0 * a["exciton_population_per_molecule"][i] - b["excited_population"][i]) < 1e-8);
    }
}

TEST_CASE("vibrational polaritons sit at omega_v +- g sqrt(N)") {
    for (int n : {1, 4, 9}) {
        auto spec = default_spec(ModelKind::vsc, n);
        spec.omega_v = 0.2;
        spec.omega_c = 0.2;
        spec.g = 0.01;
        spec.n_exc = 1;
        const Model m = build_model(spec);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.hamiltonian.to_dense());
        std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        // ground plus the two polaritons; dark states are not symmetric, so none sit at omega_v
        auto near = [&](double x) {
            return std::any_of(ev.begin(), ev.end(), [x](double e) { return std::abs(e - x) < 1e-10; });
        };
        const double split = 0.01 * std::sqrt(double(n));
        CHECK(near(0.0));
        CHECK(near(0.2 - split));
        CHECK(near(0.2 + split));
        CHECK(ev.size() == 3);
        CHECK(static_cast<long>(std::count_if(ev.begin(), ev.end(), [](double e) {
                  return std::abs(e - 0.2) < 1e-10;
              })) == 0);
    }
}

TEST_CASE("three-level model pieces") {
    auto spec = default_spec(ModelKind::three_level, 4);
    const Model m = build_model(spec);
    CHECK(m.basis->emitters().size() == 15);
    CHECK(is_hermitian(m.hamiltonian));
    REQUIRE(m.collapses.size() == 3);  // cavity plus one per downward transition
    const auto v = dipole_dipole_coefficients(3, spec.dipole_coupling);
    CHECK(v.order() == 2);
    CHECK(v.is_hermitian_generating());

    const auto tr = run_model([&] {
        auto s = spec;
        s.t_max_fs = 1.0;
        s.n_samples = 2;
        return s;
    }());
    CHECK(std::abs(tr["population_3"][0] - 4.0) < 1e-14);
    CHECK(std::abs(tr["population_1"][0]) < 1e-14);
    CHECK(std::abs(tr["pair_dipole"][0]) < 1e-14);
}

TEST_CASE("dipole-dipole coefficients reproduce the explicit pair sum") {
    for (int n : {2, 3}) {
        const FockBasis fock(3, n);
        const oracle::FullBasis full(3, n);
        Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(3, 3);
        mu(0, 1) = mu(1, 0) = mu(1, 2) = mu(2, 1) = 1.0;
        auto pairs = SparseOperator::zero(full.dim());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) {
                    pairs = pairs + oracle::lift_local(full, mu, i) * oracle::lift_local(full, mu, j);
                }
            }
        }
        const auto t = oracle::build_isometry(full, fock).t;
        const auto sq = second_quantize(fock, dipole_dipole_coefficients(3, 0.1));
        CHECK(max_abs_diff(sq, scale(oracle::project(t, pairs), 0.1)) < 1e-12);
    }
}

TEST_CASE("coherent product state is normalized and has the product amplitudes") {
    const FockBasis b(3, 2);
    Eigen::VectorXd c(2);
    c << 0.6, 0.8;
    const auto psi = coherent_product_state(b, 1, c);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-14);
    // (0.6 b1^dag + 0.8 b2^dag)^2 / sqrt2 |vac>: amplitude of |0,1,1> is 2*0.48/sqrt2 * 1
    const std::vector<int> mixed{0, 1, 1};
    CHECK(std::abs(psi(static_cast<Eigen::Index>(b.rank(mixed))) - 2.0 * 0.48 / std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("second-quantized and full-space Tavis-Cummings runs agree") {
    auto spec = default_spec(ModelKind::tc, 2);
    spec.t_max_fs = 60.0;
    spec.n_samples = 31;
    const auto a = run_model(spec);
    const FullModel f = build_full_model(spec);
    const auto sys = make_full_system(f);
    EvolveOptions o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-12;
    const auto b = oracle::evolve(f.basis, f.cavity_dim, sys, initial_state(f, sys), time_grid(spec), f.observables, o);
    for (std::size_t k = 0; k < a.names.size(); ++k) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(a.series[k][i] - b.series[k][i]) < 1e-9);
        }
    }
}

TEST_CASE("model validation") {
    auto bad = default_spec(ModelKind::tc, 1);
    bad.n_emitters = 0;
    CHECK_THROWS_AS(build_model(bad), std::invalid_argument);
    auto rates = default_spec(ModelKind::tc, 1);
    rates.gamma_c = -1.0;
    CHECK_THROWS_AS(validate(rates), std::invalid_argument);
    auto levels = default_spec(ModelKind::three_level, 2);
    levels.levels = 1;
    CHECK_THROWS_AS(validate(levels), std::invalid_argument);
    auto photons = default_spec(ModelKind::vsc, 2);
    photons.initial_photons = photons.n_cav;
    CHECK_THROWS_AS(validate(photons), std::invalid_argument);
    CHECK(parse_kind("HTC") == ModelKind::htc);
    CHECK_FALSE(parse_kind("qubit").has_value());
}
