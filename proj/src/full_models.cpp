#include "permsym/full_models.hpp"

#include <cmath>
#include <stdexcept>

#include "permsym/franck_condon.hpp"

namespace permsym {

namespace {

using oracle::collective;
using oracle::FullBasis;
using oracle::lift_local;

// |b><a| on one site
Eigen::MatrixXcd ket_bra(int d, int b, int a) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    m(b, a) = 1.0;
    return m;
}

Eigen::MatrixXcd cavity_dense(int n_cav, bool dagger) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_cav, n_cav);
    for (int k = 1; k < n_cav; ++k) {
        a(k - 1, k) = std::sqrt(double(k));
    }
    return dagger ? Eigen::MatrixXcd(a.adjoint()) : a;
}

struct Site {
    Eigen::MatrixXcd h;         // one-emitter Hamiltonian
    Eigen::MatrixXcd absorb;    // X in g sum_i (X_i a + X_i^dag a^dag)
    std::vector<Eigen::MatrixXcd> jumps;  // collective emitter jumps, already scaled
    Eigen::VectorXcd initial;   // one-emitter initial state
    int initial_photons = 0;
};

Site site_of(const ModelSpec& s) {
    const int d = emitter_modes(s);
    Site site;
    site.h = Eigen::MatrixXcd::Zero(d, d);
    site.absorb = Eigen::MatrixXcd::Zero(d, d);
    site.initial = Eigen::VectorXcd::Zero(d);
    switch (s.kind) {
        case ModelKind::tc:
            // levels g = 0, e = 1
            site.h(0, 0) = -0.5 * s.omega_0;
            site.h(1, 1) = 0.5 * s.omega_0;
            site.absorb(1, 0) = 1.0;
            site.initial(1) = 1.0;
            break;
        case ModelKind::htc: {
            const int ng = s.n_vib_ground;
            const int ne = s.n_vib_excited;
            for (int nu = 0; nu < ng; ++nu) {
                site.h(nu, nu) = s.omega_v * nu;
            }
            for (int nu = 0; nu < ne; ++nu) {
                site.h(ng + nu, ng + nu) = s.omega_e + s.omega_v * nu - s.lambda_v * s.lambda_v / s.omega_v;
            }
            const Eigen::MatrixXd f = franck_condon_table(s.lambda_v, s.omega_v, ne, ng);
            for (int nu = 0; nu < ne; ++nu) {
                for (int nup = 0; nup < ng; ++nup) {
                    site.absorb(ng + nu, nup) = f(nu, nup);
                }
                site.initial(ng + nu) = f(nu, 0);
            }
            site.initial.normalize();
            break;
        }
        case ModelKind::three_level:
            for (int k = 0; k < d; ++k) {
                site.h(k, k) = s.omega_e * (k + 1);
            }
            // X^dag = sum |nu><nu+1| goes with a^dag: a photon is emitted on every downward step
            for (int k = 0; k + 1 < d; ++k) {
                site.absorb(k + 1, k) = 1.0;
                if (s.gamma_down > 0.0) {
                    site.jumps.push_back(std::sqrt(s.gamma_down) * ket_bra(d, k, k + 1));
                }
            }
            site.initial(d - 1) = 1.0;
            break;
        case ModelKind::vsc:
            for (int k = 0; k < d; ++k) {
                site.h(k, k) = s.omega_v * k;
                if (k + 1 < d) {
                    site.absorb(k + 1, k) = std::sqrt(double(k + 1));
                }
            }
            site.initial(0) = 1.0;
            site.initial_photons = s.initial_photons;
            break;
    }
    return site;
}

}  // namespace

FullModel build_full_model(const ModelSpec& spec) {
    validate(spec);
    const int d = emitter_modes(spec);
    const int n = spec.n_emitters;
    const int nc = spec.n_cav;
    FullBasis basis(d, n);
    const Site site = site_of(spec);

    const auto a = SparseOperator::from_dense(cavity_dense(nc, false));
    const auto a_dag = SparseOperator::from_dense(cavity_dense(nc, true));
    const auto n_cav = a_dag * a;
    const auto id_c = SparseOperator::identity(static_cast<std::size_t>(nc));
    const auto id_e = SparseOperator::identity(basis.dim());

    const auto x = collective(basis, site.absorb);
    SparseOperator h_em = collective(basis, site.h);
    Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(d, d);
    if (spec.kind == ModelKind::three_level) {
        for (int k = 0; k + 1 < d; ++k) {
            mu(k, k + 1) = 1.0;
            mu(k + 1, k) = 1.0;
        }
    }
    // sum over ordered pairs of distinct emitters of mu_i mu_j
    SparseOperator pair_sum = SparseOperator::zero(basis.dim());
    if (spec.kind == ModelKind::three_level) {
        std::vector<SparseOperator> mu_site;
        for (int i = 0; i < n; ++i) {
            mu_site.push_back(lift_local(basis, mu, i));
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i != j) {
                    pair_sum = pair_sum + mu_site[static_cast<std::size_t>(i)] * mu_site[static_cast<std::size_t>(j)];
                }
            }
        }
        h_em = h_em + scale(pair_sum, spec.dipole_coupling);
    }

    FullModel m{basis, nc, {}, {}, {}, {}, {}, {}};
    m.hamiltonian = kron(h_em, id_c) + kron(id_e, scale(n_cav, spec.omega_c)) +
                    scale(kron(x, a) + kron(adjoint(x), a_dag), spec.g);
    if (spec.gamma_c > 0.0) {
        m.collapses.push_back(kron(id_e, scale(a, std::sqrt(spec.gamma_c))));
    }
    for (const auto& jump : site.jumps) {
        m.collapses.push_back(kron(collective(basis, jump), id_c));
    }

    // product initial state, emitters then cavity
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd next(psi.size() * d);
        for (Eigen::Index r = 0; r < psi.size(); ++r) {
            next.segment(r * d, d) = psi(r) * site.initial;
        }
        psi = std::move(next);
    }
    Eigen::VectorXcd cav = Eigen::VectorXcd::Zero(nc);
    cav(site.initial_photons) = 1.0;
    m.psi0 = Eigen::VectorXcd(psi.size() * nc);
    for (Eigen::Index r = 0; r < psi.size(); ++r) {
        m.psi0.segment(r * nc, nc) = psi(r) * cav;
    }

    auto level_sum = [&](int from, int to) {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
        for (int k = from; k < to; ++k) {
            p(k, k) = 1.0;
        }
        return collective(basis, p);
    };
    switch (spec.kind) {
        case ModelKind::tc:
            m.observables = {{"cavity_population", kron(id_e, n_cav)}, {"excited_population", kron(level_sum(1, 2), id_c)}};
            break;
        case ModelKind::htc:
            m.observables = {
                {"cavity_population_per_molecule", kron(id_e, scale(n_cav, 1.0 / n))},
                {"exciton_population_per_molecule",
                 kron(scale(level_sum(spec.n_vib_ground, d), 1.0 / n), id_c)}};
            break;
        case ModelKind::three_level:
            for (int k = 0; k < d; ++k) {
                m.observables.push_back({"population_" + std::to_string(k + 1), kron(level_sum(k, k + 1), id_c)});
            }
            if (n >= 2) {
                m.observables.push_back({"pair_dipole", kron(scale(pair_sum, 1.0 / (double(n) * (n - 1))), id_c)});
            }
            break;
        case ModelKind::vsc: {
            Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(d, d);
            for (int k = 0; k < d; ++k) {
                q(k, k) = double(k);
            }
            m.observables = {{"cavity_population", kron(id_e, n_cav)},
                             {"vibrational_quanta", kron(collective(basis, q), id_c)}};
            break;
        }
    }
    m.number_operator = kron(level_sum(0, d), id_c);
    std::vector<Triplet> top;
    for (std::size_t e = 0; e < basis.dim(); ++e) {
        const std::size_t i = e * static_cast<std::size_t>(nc) + static_cast<std::size_t>(nc - 1);
        top.push_back({i, i, cplx(1.0)});
    }
    m.cavity_top = SparseOperator::from_triplets(basis.dim() * static_cast<std::size_t>(nc), std::move(top));
    return m;
}

LindbladSystem make_full_system(const FullModel& model) {
    LindbladSystem::Options opts;
    std::vector<std::size_t> support;
    for (Eigen::Index i = 0; i < model.psi0.size(); ++i) {
        if (model.psi0(i) != cplx(0.0)) {
            support.push_back(static_cast<std::size_t>(i));
        }
    }
    opts.coupled_groups.push_back(std::move(support));
    return LindbladSystem(model.hamiltonian, model.collapses, std::move(opts));
}

DensityMatrix initial_state(const FullModel& model, const LindbladSystem& system) {
    return DensityMatrix::from_pure(system.partition_ptr(), model.psi0);
}

CsrMatrix model_isometry(const Model& model, const FullModel& full) {
    const auto iso = oracle::build_isometry(full.basis, model.basis->emitters());
    return oracle::isometry_with_cavity(iso, *model.basis);
}

}  // namespace permsym
