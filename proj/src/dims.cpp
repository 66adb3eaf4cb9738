#include "permsym/dims.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "permsym/fock_basis.hpp"

namespace permsym {

namespace {

using u128 = unsigned __int128;

std::string integer_text(long double v) {
    if (v < 1e30L) {
        auto x = static_cast<u128>(v + 0.5L);
        if (x == 0) {
            return "0";
        }
        std::string s;
        while (x > 0) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(x % 10)));
            x /= 10;
        }
        return s;
    }
    std::ostringstream out;
    out << std::setprecision(6) << static_cast<double>(v);
    return out.str();
}

}  // namespace

long double exact_binomial(unsigned n, unsigned k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    u128 r = 1;
    constexpr u128 limit = ~u128(0) / 4096;
    for (unsigned i = 1; i <= k; ++i) {
        if (r > limit / (n - k + i)) {
            throw std::overflow_error("exact_binomial: result does not fit in 128 bits");
        }
        r = r * (n - k + i) / i;
    }
    return static_cast<long double>(r);
}

DimsReport dims_report(const ModelSpec& spec) {
    validate(spec);
    DimsReport r;
    r.modes = emitter_modes(spec);
    r.emitters = spec.n_emitters;
    r.cavity_dim = spec.n_cav;
    const auto d = static_cast<unsigned>(r.modes);
    const auto n = static_cast<unsigned>(r.emitters);
    const long double nc = r.cavity_dim;
    r.emitter_axis = exact_binomial(n + d - 1, n);
    r.symmetric_axis = r.emitter_axis * nc;
    r.full_axis = std::pow(static_cast<long double>(d), static_cast<long double>(n)) * nc;
    r.symmetric_entries = r.symmetric_axis * r.symmetric_axis;
    r.full_entries = r.full_axis * r.full_axis;
    r.liouville_entries = exact_binomial(n + d * d - 1, n) * nc * nc;
    if (spec.kind == ModelKind::vsc && spec.n_exc) {
        auto fock = std::make_shared<const FockBasis>(r.modes, r.emitters);
        std::vector<int> w(d);
        for (unsigned k = 0; k < d; ++k) {
            w[k] = static_cast<int>(k);
        }
        r.restricted_axis = static_cast<long double>(
            restrict_composite(CompositeBasis(fock, spec.n_cav), w, spec.n_exc).size());
    }
    return r;
}

void print_dims(const DimsReport& r, const ModelSpec& spec, std::ostream& out) {
    auto row = [&out](const std::string& label, const std::string& value) {
        out << "  " << std::left << std::setw(44) << label << value << '\n';
    };
    out << "model " << kind_name(spec.kind) << ": d = " << r.modes << ", N = " << r.emitters
        << ", N_c = " << r.cavity_dim << '\n';
    out << "Hilbert-space axis\n";
    row("emitter sector C(N+d-1,N)", integer_text(r.emitter_axis));
    row("symmetric C(N+d-1,N) x N_c", integer_text(r.symmetric_axis));
    if (r.restricted_axis) {
        row("symmetric, excitation-restricted", integer_text(*r.restricted_axis));
    }
    row("full product space d^N x N_c", integer_text(r.full_axis));
    out << "density-matrix entries\n";
    row("symmetric (C(N+d-1,N) N_c)^2", integer_text(r.symmetric_entries));
    row("full product space d^(2N) N_c^2", integer_text(r.full_entries));
    row("symmetrized Liouville C(N+d^2-1,N) N_c^2", integer_text(r.liouville_entries));
    out << "ratios\n";
    std::ostringstream a;
    a << std::fixed << std::setprecision(2) << static_cast<double>(r.full_over_symmetric());
    row("full / symmetric", a.str());
    std::ostringstream b;
    const double lr = static_cast<double>(r.liouville_over_symmetric());
    b << std::fixed << std::setprecision(2) << lr << " (factor of " << std::llround(lr) << ")";
    row("Liouville / symmetric", b.str());
}

}  // namespace permsym
