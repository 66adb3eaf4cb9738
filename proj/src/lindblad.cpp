#include "permsym/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "permsym/kernels.hpp"

namespace permsym {

Expectation expectation(const SparseOperator& op, const DensityMatrix& rho) {
    if (op.dim() != rho.dim()) {
        throw std::invalid_argument("expectation: operator and density matrix dimensions differ");
    }
    const auto& p = rho.partition();
    const auto& m = op.matrix();
    auto rp = m.row_ptr();
    auto ci = m.col_idx();
    auto v = m.values();
    auto data = rho.data();
    cplx sum(0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const std::size_t b = p.block_of(i);
        const std::size_t n = p.block_size(b);
        const std::size_t base = p.offset(b) + p.local_index(i);
        for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
            const std::size_t j = ci[k];
            if (p.block_of(j) != b) {
                continue;
            }
            // O_ij rho_ji
            sum += v[k] * data[base + p.local_index(j) * n];
        }
    }
    return {sum.real(), sum.imag()};
}

LindbladSystem::LindbladSystem(SparseOperator hamiltonian, std::vector<SparseOperator> collapses)
    : LindbladSystem(std::move(hamiltonian), std::move(collapses), Options{}) {}

LindbladSystem::LindbladSystem(SparseOperator hamiltonian, std::vector<SparseOperator> collapses, Options options)
    : h_(std::move(hamiltonian)), c_(std::move(collapses)), options_(std::move(options)) {
    build();
}

void LindbladSystem::build() {
    const std::size_t n = h_.dim();
    if (!is_hermitian(h_)) {
        throw std::invalid_argument("LindbladSystem: Hamiltonian is not Hermitian");
    }
    cdc_.reserve(c_.size());
    for (const auto& c : c_) {
        if (c.dim() != n) {
            throw std::invalid_argument("LindbladSystem: collapse operator dimension differs from H");
        }
        cdc_.push_back(adjoint(c) * c);
    }

    partition_ = std::make_shared<const BlockPartition>(
        options_.detect_blocks ? BlockPartition::detect(h_, c_, options_.coupled_groups) : BlockPartition::single(n));
    const auto& p = *partition_;
    const std::size_t nb = p.num_blocks();

    SparseOperator k_sum = SparseOperator::zero(n, h_.basis_tag());
    for (const auto& cdc : cdc_) {
        k_sum = k_sum + cdc;
    }

    shift_.assign(nb, 0.0);
    if (options_.center_blocks) {
        for (std::size_t b = 0; b < nb; ++b) {
            double s = 0.0;
            for (std::size_t i : p.members(b)) {
                s += h_.at(i, i).real();
            }
            shift_[b] = s / static_cast<double>(p.block_size(b));
        }
    }

    std::vector<std::vector<Triplet>> a_trip(nb);
    const cplx minus_i(0.0, -1.0);
    auto add_rows = [&](const CsrMatrix& m, cplx factor) {
        auto rp = m.row_ptr();
        auto ci = m.col_idx();
        auto v = m.values();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t b = p.block_of(i);
            for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
                if (p.block_of(ci[k]) != b) {
                    throw std::logic_error("LindbladSystem: operator couples different blocks");
                }
                a_trip[b].push_back({p.local_index(i), p.local_index(ci[k]), factor * v[k]});
            }
        }
    };
    add_rows(h_.matrix(), minus_i);
    add_rows(k_sum.matrix(), cplx(-0.5));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = p.block_of(i);
        if (shift_[b] != 0.0) {
            a_trip[b].push_back({p.local_index(i), p.local_index(i), -minus_i * shift_[b]});
        }
    }
    a_.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t nbsz = p.block_size(b);
        a_.push_back(CsrMatrix::from_triplets(nbsz, nbsz, std::move(a_trip[b])));
        max_block_sq_ = std::max(max_block_sq_, nbsz * nbsz);
    }

    for (const auto& c : c_) {
        const auto& m = c.matrix();
        auto rp = m.row_ptr();
        auto ci = m.col_idx();
        auto v = m.values();
        std::vector<std::vector<Triplet>> by_source(nb);
        std::vector<std::size_t> target(nb, nb);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t t = p.block_of(i);
            for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
                const std::size_t s = p.block_of(ci[k]);
                if (target[s] != nb && target[s] != t) {
                    throw std::logic_error("LindbladSystem: collapse operator splits a block");
                }
                target[s] = t;
                by_source[s].push_back({p.local_index(i), p.local_index(ci[k]), v[k]});
            }
        }
        for (std::size_t s = 0; s < nb; ++s) {
            if (by_source[s].empty()) {
                continue;
            }
            const std::size_t t = target[s];
            CollapsePiece piece{s, t, CsrMatrix::from_triplets(p.block_size(t), p.block_size(s), std::move(by_source[s]))};
            max_piece_ = std::max(max_piece_, p.block_size(t) * p.block_size(s));
            pieces_.push_back(std::move(piece));
        }
    }

    all_.offset.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        all_.blocks.push_back(b);
        all_.offset[b] = p.offset(b);
    }
    all_.storage = p.storage_size();
}

ActiveBlocks LindbladSystem::reachable_blocks(const DensityMatrix& rho) const {
    if (!(rho.partition() == *partition_)) {
        throw std::invalid_argument("LindbladSystem::reachable_blocks: density matrix uses a different block partition");
    }
    const auto& p = *partition_;
    const std::size_t nb = p.num_blocks();
    std::vector<char> on(nb, 0);
    auto data = rho.data();
    for (std::size_t b = 0; b < nb; ++b) {
        const auto block = data.subspan(p.offset(b), p.block_size(b) * p.block_size(b));
        on[b] = std::any_of(block.begin(), block.end(), [](cplx v) { return v != cplx(0.0); });
    }
    // jumps only move weight from source to target, so a fixed point is the closure
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& piece : pieces_) {
            if (on[piece.source] && !on[piece.target]) {
                on[piece.target] = 1;
                changed = true;
            }
        }
    }
    ActiveBlocks act;
    act.offset.assign(nb, ActiveBlocks::inactive);
    for (std::size_t b = 0; b < nb; ++b) {
        if (on[b]) {
            act.blocks.push_back(b);
            act.offset[b] = act.storage;
            act.storage += p.block_size(b) * p.block_size(b);
        }
    }
    return act;
}

RhsWorkspace LindbladSystem::make_workspace() const {
    RhsWorkspace ws;
    ws.w.resize(max_block_sq_);
    ws.z.resize(max_piece_);
    return ws;
}

void LindbladSystem::rhs_impl(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws, bool serial,
                              const ActiveBlocks& active) const {
    const auto& p = *partition_;
    if (rho.size() != active.storage || out.size() != active.storage || active.offset.size() != p.num_blocks()) {
        throw std::invalid_argument("LindbladSystem::rhs: storage size mismatch");
    }
    if (ws.w.size() < max_block_sq_ || ws.z.size() < max_piece_) {
        ws = make_workspace();
    }
    auto spmm = serial ? kernels::spmm_serial : kernels::spmm;

    // A rho + (A rho)^dag covers the commutator and the anticommutator
    for (std::size_t b : active.blocks) {
        const std::size_t n = p.block_size(b);
        const std::size_t off = active.offset[b];
        spmm(a_[b], rho.data() + off, ws.w.data(), n, cplx(1.0), false);
        kernels::add_with_adjoint(ws.w.data(), n, out.data() + off, !serial);
    }
    // C rho C^dag = (C rho) C^dag
    for (const auto& piece : pieces_) {
        const std::size_t src = active.offset[piece.source];
        if (src == ActiveBlocks::inactive) {
            continue;
        }
        const std::size_t dst = active.offset[piece.target];
        if (dst == ActiveBlocks::inactive) {
            throw std::logic_error("LindbladSystem::rhs: active block set is not closed under jumps");
        }
        const std::size_t ns = p.block_size(piece.source);
        const std::size_t nt = p.block_size(piece.target);
        spmm(piece.c, rho.data() + src, ws.z.data(), ns, cplx(1.0), false);
        kernels::multiply_adjoint(ws.z.data(), nt, piece.c, out.data() + dst, !serial);
    }
}

void LindbladSystem::rhs_hermitian(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws) const {
    rhs_impl(rho, out, ws, false, all_);
}

void LindbladSystem::rhs_hermitian(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws,
                                   const ActiveBlocks& active) const {
    rhs_impl(rho, out, ws, false, active);
}

void LindbladSystem::rhs_hermitian_serial(std::span<const cplx> rho, std::span<cplx> out, RhsWorkspace& ws) const {
    rhs_impl(rho, out, ws, true, all_);
}

DensityMatrix LindbladSystem::rhs(const DensityMatrix& rho) const {
    if (rho.dim() != dim()) {
        throw std::invalid_argument("LindbladSystem::rhs: dimension mismatch");
    }
    if (!(rho.partition() == *partition_)) {
        throw std::invalid_argument("LindbladSystem::rhs: density matrix uses a different block partition");
    }
    const auto& p = *partition_;
    // rho = X + iY with X, Y Hermitian; the generator is linear
    std::vector<cplx> x(p.storage_size());
    std::vector<cplx> y(p.storage_size());
    auto src = rho.data();
    for (std::size_t b = 0; b < p.num_blocks(); ++b) {
        const std::size_t n = p.block_size(b);
        const std::size_t off = p.offset(b);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const cplx a = src[off + r * n + c];
                const cplx at = std::conj(src[off + c * n + r]);
                x[off + r * n + c] = 0.5 * (a + at);
                y[off + r * n + c] = cplx(0.0, -0.5) * (a - at);
            }
        }
    }
    RhsWorkspace ws = make_workspace();
    std::vector<cplx> fx(p.storage_size());
    std::vector<cplx> fy(p.storage_size());
    rhs_hermitian(x, fx, ws);
    rhs_hermitian(y, fy, ws);
    DensityMatrix out(partition_);
    auto dst = out.data();
    for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] = (fx[k] + cplx(0.0, 1.0) * fy[k]) / hbar_ev_fs;
    }
    out.set_time_fs(rho.time_fs());
    return out;
}

Trajectory evolve(const LindbladSystem& system, const DensityMatrix& rho0, std::span<const double> t_grid_fs,
                  std::span<const NamedOperator> observables, const EvolveOptions& options) {
    if (rho0.dim() != system.dim() || !(rho0.partition() == system.partition())) {
        throw std::invalid_argument("evolve: initial state does not match the system's basis and block partition");
    }
    if (t_grid_fs.empty()) {
        throw std::invalid_argument("evolve: empty time grid");
    }
    if (t_grid_fs.front() < 0.0) {
        throw std::invalid_argument("evolve: time grid must start at or after 0");
    }
    for (std::size_t i = 1; i < t_grid_fs.size(); ++i) {
        if (!(t_grid_fs[i] > t_grid_fs[i - 1])) {
            throw std::invalid_argument("evolve: time grid must be strictly increasing");
        }
    }
    std::vector<std::string> names;
    for (const auto& o : observables) {
        if (o.op.dim() != system.dim()) {
            throw std::invalid_argument("evolve: observable '" + o.name + "' has the wrong dimension");
        }
        names.push_back(o.name);
    }
    if (options.leakage_probe && options.leakage_probe->dim() != system.dim()) {
        throw std::invalid_argument("evolve: leakage probe has the wrong dimension");
    }
    if (options.number_operator && options.number_operator->dim() != system.dim()) {
        throw std::invalid_argument("evolve: number operator has the wrong dimension");
    }

    const std::size_t n_times = t_grid_fs.size();
    Trajectory traj(std::vector<double>(t_grid_fs.begin(), t_grid_fs.end()), std::move(names));

    std::set<std::size_t> positivity_at;
    if (options.positivity_samples == 1 || n_times == 1) {
        positivity_at.insert(n_times - 1);
    } else if (options.positivity_samples > 1) {
        const std::size_t k = std::min(options.positivity_samples, n_times);
        for (std::size_t s = 0; s < k; ++s) {
            positivity_at.insert(static_cast<std::size_t>(
                std::llround(static_cast<double>(s) * static_cast<double>(n_times - 1) / static_cast<double>(k - 1))));
        }
    }

    const auto& p = system.partition();
    DensityMatrix current(rho0.partition_ptr());
    double worst_leak = 0.0;
    double worst_leak_time = 0.0;

    // blocks that can never be populated are left out of the integrated state
    const ActiveBlocks active = system.reachable_blocks(rho0);
    traj.integrated_entries = active.storage;

    auto observe = [&](std::size_t i, double /*tau*/, std::span<const cplx> y) {
        for (std::size_t b : active.blocks) {
            const std::size_t n2 = p.block_size(b) * p.block_size(b);
            std::copy_n(y.begin() + static_cast<std::ptrdiff_t>(active.offset[b]), n2,
                        current.data().begin() + static_cast<std::ptrdiff_t>(p.offset(b)));
        }
        current.set_time_fs(t_grid_fs[i]);
        for (std::size_t k = 0; k < observables.size(); ++k) {
            const auto e = expectation(observables[k].op, current);
            traj.series[k][i] = e.value;
            traj.max_imaginary_residue = std::max(traj.max_imaginary_residue, std::abs(e.imaginary));
        }
        const cplx tr = current.trace();
        traj.trace_error[i] = std::abs(tr - cplx(1.0));
        traj.hermiticity_error[i] = current.hermiticity_error();
        if (options.leakage_probe) {
            const double leak = expectation(*options.leakage_probe, current).value;
            traj.cavity_top_population[i] = leak;
            if (leak > worst_leak) {
                worst_leak = leak;
                worst_leak_time = t_grid_fs[i];
            }
        }
        if (options.number_operator) {
            traj.emitter_number_error[i] =
                std::abs(expectation(*options.number_operator, current).value - options.particles);
        }
        if (positivity_at.count(i) != 0) {
            traj.positivity.push_back({t_grid_fs[i], current.min_eigenvalue()});
        }
        if (options.on_sample) {
            options.on_sample(i, current);
        }
    };

    RhsWorkspace ws = system.make_workspace();
    auto rhs = [&](double, std::span<const cplx> y, std::span<cplx> dydt) {
        system.rhs_hermitian(y, dydt, ws, active);
    };
    auto hermitize = [&](std::span<cplx> y) {
        for (std::size_t b : active.blocks) {
            kernels::hermitize(y.data() + active.offset[b], p.block_size(b));
        }
    };

    std::vector<double> taus(n_times);
    for (std::size_t i = 0; i < n_times; ++i) {
        taus[i] = t_grid_fs[i] / hbar_ev_fs;
    }
    std::vector<cplx> y(active.storage);
    for (std::size_t b : active.blocks) {
        const auto block = rho0.data().subspan(p.offset(b), p.block_size(b) * p.block_size(b));
        std::copy(block.begin(), block.end(), y.begin() + static_cast<std::ptrdiff_t>(active.offset[b]));
    }

    Dopri5Options dopts;
    dopts.rel_tol = options.rel_tol;
    dopts.abs_tol = options.abs_tol;
    dopts.max_steps = options.max_steps;
    Dopri5 solver(y.size(), dopts);
    traj.stats = solver.integrate(rhs, y, taus.front(), taus, observe, hermitize);

    std::ostringstream msg;
    if (options.leakage_probe && options.leakage_is_truncation && worst_leak > options.leakage_threshold) {
        msg << "cavity truncation leakage " << worst_leak << " at t=" << worst_leak_time << " fs exceeds threshold "
            << options.leakage_threshold << "; increase the cavity dimension";
        traj.warnings.push_back(msg.str());
    }
    if (traj.max_imaginary_residue > 1e-10) {
        msg.str({});
        msg << "imaginary residue of observables reached " << traj.max_imaginary_residue;
        traj.warnings.push_back(msg.str());
    }
    if (traj.min_sampled_eigenvalue() < -1e-8) {
        msg.str({});
        msg << "sampled minimum eigenvalue " << traj.min_sampled_eigenvalue() << " below -1e-8";
        traj.warnings.push_back(msg.str());
    }
    return traj;
}

}  // namespace permsym
