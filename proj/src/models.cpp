#include "permsym/models.hpp"

#include <cmath>
#include <stdexcept>

#include "permsym/franck_condon.hpp"

namespace permsym {

namespace {

struct Parts {
    std::shared_ptr<const FockBasis> fock;
    std::shared_ptr<const CompositeBasis> basis;
    BosonMode cav;
    SparseOperator emitter_id;
    SparseOperator cavity_id;
};

Parts make_parts(int modes, int particles, int cavity_dim) {
    auto fock = std::make_shared<const FockBasis>(modes, particles);
    auto basis = std::make_shared<const CompositeBasis>(fock, cavity_dim);
    return {fock, basis, boson_mode(cavity_dim), SparseOperator::identity(fock->size(), fock->tag()),
            SparseOperator::identity(static_cast<std::size_t>(cavity_dim))};
}

// b^dag_beta b_alpha on the sector
SparseOperator hop(const FockBasis& fock, int beta, int alpha) {
    const int c[1] = {beta};
    const int a[1] = {alpha};
    return normal_ordered_string(fock, c, a);
}

SparseOperator top_projector(const CompositeBasis& basis) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis.cavity_level(i) == basis.cavity_dim() - 1) {
            t.push_back({i, i, cplx(1.0)});
        }
    }
    return SparseOperator::from_triplets(basis.size(), std::move(t), basis.tag());
}

Eigen::VectorXcd basis_vector(const CompositeBasis& basis, const FockState& emitters, int cavity_level) {
    const std::size_t e = basis.emitters().rank(emitters);
    const auto full = e * static_cast<std::size_t>(basis.cavity_dim()) + static_cast<std::size_t>(cavity_level);
    const auto idx = basis.index_of_full(full);
    if (!idx) {
        throw std::invalid_argument("initial state lies outside the restricted basis");
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    psi(static_cast<Eigen::Index>(*idx)) = 1.0;
    return psi;
}

FockState fully_inverted(int modes, int particles) {
    FockState s{std::vector<int>(static_cast<std::size_t>(modes), 0)};
    s.occ.back() = particles;
    return s;
}

void finish(Model& m) {
    const auto& basis = *m.basis;
    m.number_operator = kron(number_operator(basis.emitters()), SparseOperator::identity(
                                 static_cast<std::size_t>(basis.cavity_dim())), basis);
    m.cavity_top = top_projector(basis);
}

}  // namespace

MBodyCoefficients dipole_dipole_coefficients(int levels, double dipole_coupling) {
    // mu = sum_nu |nu><nu+1| + h.c., nearest-level transitions
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(levels, levels);
    for (int k = 0; k + 1 < levels; ++k) {
        mu(k, k + 1) = 1.0;
        mu(k + 1, k) = 1.0;
    }
    MBodyCoefficients v(2, levels);
    for (int b1 = 0; b1 < levels; ++b1) {
        for (int a1 = 0; a1 < levels; ++a1) {
            if (mu(b1, a1) == 0.0) {
                continue;
            }
            for (int b2 = 0; b2 < levels; ++b2) {
                for (int a2 = 0; a2 < levels; ++a2) {
                    if (mu(b2, a2) == 0.0) {
                        continue;
                    }
                    v.add({b1, b2}, {a1, a2}, 2.0 * dipole_coupling * mu(b1, a1) * mu(b2, a2));
                }
            }
        }
    }
    return v;
}

Eigen::VectorXcd coherent_product_state(const FockBasis& basis, int first_mode, const Eigen::VectorXd& c) {
    const int n = basis.particles();
    const auto k = static_cast<int>(c.size());
    if (first_mode < 0 || first_mode + k > basis.modes()) {
        throw std::invalid_argument("coherent_product_state: coefficient modes out of range");
    }
    std::vector<double> log_fact(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        log_fact[static_cast<std::size_t>(i)] = log_fact[static_cast<std::size_t>(i) - 1] + std::log(double(i));
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t s = 0; s < basis.size(); ++s) {
        const auto occ = basis.occupations(s);
        int inside = 0;
        for (int a = first_mode; a < first_mode + k; ++a) {
            inside += occ[static_cast<std::size_t>(a)];
        }
        if (inside != n) {
            continue;
        }
        // sqrt(N! / prod n!) prod c^n
        double amp = std::exp(0.5 * log_fact[static_cast<std::size_t>(n)]);
        for (int a = 0; a < k; ++a) {
            const int na = occ[static_cast<std::size_t>(first_mode + a)];
            amp *= std::pow(c(a), na) / std::exp(0.5 * log_fact[static_cast<std::size_t>(na)]);
        }
        psi(static_cast<Eigen::Index>(s)) = amp;
    }
    return psi;
}

Model tavis_cummings(const ModelSpec& spec) {
    validate(spec);
    const int n = spec.n_emitters;
    auto p = make_parts(2, n, spec.n_cav);
    const auto& fock = *p.fock;
    const auto& basis = *p.basis;
    constexpr int g_mode = 0;
    constexpr int e_mode = 1;

    Model m;
    m.spec = spec;
    m.basis = p.basis;
    m.mode_labels = {"g", "e"};
    const auto n_e = hop(fock, e_mode, e_mode);
    const auto n_g = hop(fock, g_mode, g_mode);
    const auto raise = hop(fock, e_mode, g_mode);  // b_e^dag b_g
    const auto lower = hop(fock, g_mode, e_mode);
    m.hamiltonian = kron(scale(n_e - n_g, 0.5 * spec.omega_0), p.cavity_id, basis) +
                    kron(p.emitter_id, scale(p.cav.n, spec.omega_c), basis) +
                    scale(kron(raise, p.cav.a, basis) + kron(lower, p.cav.a_dag, basis), spec.g);
    if (spec.gamma_c > 0.0) {
        m.collapses.push_back(kron(p.emitter_id, scale(p.cav.a, std::sqrt(spec.gamma_c)), basis));
    }
    m.psi0 = basis_vector(basis, fully_inverted(2, n), 0);
    m.observables = {{"cavity_population", kron(p.emitter_id, p.cav.n, basis)},
                     {"excited_population", kron(n_e, p.cavity_id, basis)}};
    m.truncation_exact = spec.n_cav >= n + 1;
    finish(m);
    return m;
}

Model holstein_tavis_cummings(const ModelSpec& spec) {
    validate(spec);
    const int n = spec.n_emitters;
    const int ng = spec.n_vib_ground;
    const int ne = spec.n_vib_excited;
    auto p = make_parts(ng + ne, n, spec.n_cav);
    const auto& fock = *p.fock;
    const auto& basis = *p.basis;
    auto g_mode = [](int nu) { return nu; };
    auto e_mode = [ng](int nu) { return ng + nu; };

    Model m;
    m.spec = spec;
    m.basis = p.basis;
    for (int nu = 0; nu < ng; ++nu) {
        m.mode_labels.push_back("g" + std::to_string(nu));
    }
    for (int nu = 0; nu < ne; ++nu) {
        m.mode_labels.push_back("e" + std::to_string(nu));
    }

    // single-molecule eigenbasis energies; the excited surface is shifted by the reorganisation energy
    MBodyCoefficients bare(1, ng + ne);
    for (int nu = 0; nu < ng; ++nu) {
        bare.add({g_mode(nu)}, {g_mode(nu)}, spec.omega_v * nu);
    }
    const double e0 = spec.omega_e - spec.lambda_v * spec.lambda_v / spec.omega_v;
    for (int nu = 0; nu < ne; ++nu) {
        bare.add({e_mode(nu)}, {e_mode(nu)}, e0 + spec.omega_v * nu);
    }
    const Eigen::MatrixXd f = franck_condon_table(spec.lambda_v, spec.omega_v, std::max(ne, 1), ng);
    MBodyCoefficients absorb(1, ng + ne);  // sum F_{nu nu'} b_{e,nu}^dag b_{g,nu'}
    for (int nu = 0; nu < ne; ++nu) {
        for (int nup = 0; nup < ng; ++nup) {
            if (f(nu, nup) != 0.0) {
                absorb.add({e_mode(nu)}, {g_mode(nup)}, f(nu, nup));
            }
        }
    }
    const auto x = second_quantize(fock, absorb);
    m.hamiltonian = kron(second_quantize(fock, bare), p.cavity_id, basis) +
                    kron(p.emitter_id, scale(p.cav.n, spec.omega_c), basis) +
                    scale(kron(x, p.cav.a, basis) + kron(adjoint(x), p.cav.a_dag, basis), spec.g);
    if (spec.gamma_c > 0.0) {
        m.collapses.push_back(kron(p.emitter_id, scale(p.cav.a, std::sqrt(spec.gamma_c)), basis));
    }

    // vertical excitation of every molecule from the vibrational ground state
    Eigen::VectorXd c(ne);
    for (int nu = 0; nu < ne; ++nu) {
        c(nu) = franck_condon_table(spec.lambda_v, spec.omega_v, ne, 1)(nu, 0);
    }
    const double kept = c.squaredNorm();
    if (!(kept > 0.0)) {
        throw std::invalid_argument("htc: initial state has zero norm after vibrational truncation");
    }
    m.initial_state_loss = std::max(0.0, 1.0 - kept);
    c /= std::sqrt(kept);
    const Eigen::VectorXcd em = coherent_product_state(fock, e_mode(0), c);
    m.psi0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis.cavity_level(i) == 0) {
            m.psi0(static_cast<Eigen::Index>(i)) = em(static_cast<Eigen::Index>(basis.emitter_index(i)));
        }
    }

    MBodyCoefficients excited(1, ng + ne);
    for (int nu = 0; nu < ne; ++nu) {
        excited.add({e_mode(nu)}, {e_mode(nu)}, 1.0);
    }
    const double inv_n = 1.0 / n;
    m.observables = {{"cavity_population_per_molecule", kron(p.emitter_id, scale(p.cav.n, inv_n), basis)},
                     {"exciton_population_per_molecule",
                      kron(scale(second_quantize(fock, excited), inv_n), p.cavity_id, basis)}};
    m.truncation_exact = spec.n_cav >= n + 1;
    finish(m);
    return m;
}

Model three_level(const ModelSpec& spec) {
    validate(spec);
    const int n = spec.n_emitters;
    const int d = spec.levels;
    auto p = make_parts(d, n, spec.n_cav);
    const auto& fock = *p.fock;
    const auto& basis = *p.basis;

    Model m;
    m.spec = spec;
    m.basis = p.basis;
    for (int k = 0; k < d; ++k) {
        m.mode_labels.push_back(std::to_string(k + 1));
    }

    // mode k is level nu = k + 1 with energy nu omega_e
    MBodyCoefficients bare(1, d);
    for (int k = 0; k < d; ++k) {
        bare.add({k}, {k}, spec.omega_e * (k + 1));
    }
    MBodyCoefficients down(1, d);  // sum_nu b_nu^dag b_{nu+1}
    for (int k = 0; k + 1 < d; ++k) {
        down.add({k}, {k + 1}, 1.0);
    }
    const auto lower = second_quantize(fock, down);
    const auto hdd = second_quantize(fock, dipole_dipole_coefficients(d, spec.dipole_coupling));
    m.hamiltonian = kron(second_quantize(fock, bare) + hdd, p.cavity_id, basis) +
                    kron(p.emitter_id, scale(p.cav.n, spec.omega_c), basis) +
                    scale(kron(lower, p.cav.a_dag, basis) + kron(adjoint(lower), p.cav.a, basis), spec.g);
    if (spec.gamma_c > 0.0) {
        m.collapses.push_back(kron(p.emitter_id, scale(p.cav.a, std::sqrt(spec.gamma_c)), basis));
    }
    if (spec.gamma_down > 0.0) {
        for (int k = 0; k + 1 < d; ++k) {
            m.collapses.push_back(kron(scale(hop(fock, k, k + 1), std::sqrt(spec.gamma_down)), p.cavity_id, basis));
        }
    }
    m.psi0 = basis_vector(basis, fully_inverted(d, n), 0);
    for (int k = 0; k < d; ++k) {
        m.observables.push_back({"population_" + std::to_string(k + 1), kron(hop(fock, k, k), p.cavity_id, basis)});
    }
    if (n >= 2) {
        // <mu_i mu_j> per ordered pair i != j
        const auto pair = second_quantize(fock, dipole_dipole_coefficients(d, 1.0 / (double(n) * (n - 1))));
        m.observables.push_back({"pair_dipole", kron(pair, p.cavity_id, basis)});
    }
    m.truncation_exact = false;
    finish(m);
    return m;
}

Model vsc(const ModelSpec& spec) {
    validate(spec);
    const int n = spec.n_emitters;
    const int nv = spec.n_vib;
    auto fock = std::make_shared<const FockBasis>(nv, n);
    std::vector<int> weights(static_cast<std::size_t>(nv));
    for (int k = 0; k < nv; ++k) {
        weights[static_cast<std::size_t>(k)] = k;
    }
    auto basis = std::make_shared<const CompositeBasis>(
        restrict_composite(CompositeBasis(fock, spec.n_cav), weights, spec.n_exc));
    const auto cav = boson_mode(spec.n_cav);
    const auto emitter_id = SparseOperator::identity(fock->size(), fock->tag());
    const auto cavity_id = SparseOperator::identity(static_cast<std::size_t>(spec.n_cav));

    Model m;
    m.spec = spec;
    m.basis = basis;
    for (int k = 0; k < nv; ++k) {
        m.mode_labels.push_back("v" + std::to_string(k));
    }
    MBodyCoefficients bare(1, nv);
    MBodyCoefficients up(1, nv);  // sum_n sqrt(n+1) b_{n+1}^dag b_n
    for (int k = 0; k < nv; ++k) {
        if (k > 0) {
            bare.add({k}, {k}, spec.omega_v * k);
        }
        if (k + 1 < nv) {
            up.add({k + 1}, {k}, std::sqrt(double(k + 1)));
        }
    }
    const auto raise = second_quantize(*fock, up);
    m.hamiltonian = kron(second_quantize(*fock, bare), cavity_id, *basis) +
                    kron(emitter_id, scale(cav.n, spec.omega_c), *basis) +
                    scale(kron(raise, cav.a, *basis) + kron(adjoint(raise), cav.a_dag, *basis), spec.g);
    if (spec.gamma_c > 0.0) {
        m.collapses.push_back(kron(emitter_id, scale(cav.a, std::sqrt(spec.gamma_c)), *basis));
    }
    FockState ground{std::vector<int>(static_cast<std::size_t>(nv), 0)};
    ground.occ.front() = n;
    m.psi0 = basis_vector(*basis, ground, spec.initial_photons);

    MBodyCoefficients quanta(1, nv);
    for (int k = 1; k < nv; ++k) {
        quanta.add({k}, {k}, double(k));
    }
    m.observables = {{"cavity_population", kron(emitter_id, cav.n, *basis)},
                     {"vibrational_quanta", kron(second_quantize(*fock, quanta), cavity_id, *basis)}};
    // total excitation is conserved (or decays), so the truncation is exact once both
    // the cavity and the vibrational ladder hold the largest reachable excitation
    const int reach = spec.n_exc ? std::min(*spec.n_exc, spec.initial_photons) : spec.initial_photons;
    m.truncation_exact = spec.n_cav - 1 >= reach && nv - 1 >= reach;
    finish(m);
    return m;
}

Model build_model(const ModelSpec& spec) {
    validate(spec);
    switch (spec.kind) {
        case ModelKind::tc:
            return tavis_cummings(spec);
        case ModelKind::htc:
            return holstein_tavis_cummings(spec);
        case ModelKind::three_level:
            return three_level(spec);
        case ModelKind::vsc:
            return vsc(spec);
    }
    throw std::invalid_argument("build_model: unknown model kind");
}

LindbladSystem make_system(const Model& model, bool center_blocks, bool detect_blocks) {
    LindbladSystem::Options opts;
    opts.center_blocks = center_blocks;
    opts.detect_blocks = detect_blocks;
    std::vector<std::size_t> support;
    for (Eigen::Index i = 0; i < model.psi0.size(); ++i) {
        if (model.psi0(i) != cplx(0.0)) {
            support.push_back(static_cast<std::size_t>(i));
        }
    }
    opts.coupled_groups.push_back(std::move(support));
    return LindbladSystem(model.hamiltonian, model.collapses, std::move(opts));
}

DensityMatrix initial_state(const Model& model, const LindbladSystem& system) {
    return DensityMatrix::from_pure(system.partition_ptr(), model.psi0);
}

}  // namespace permsym
