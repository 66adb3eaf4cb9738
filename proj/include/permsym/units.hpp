#pragma once

namespace permsym {

/// Reduced Planck constant in eV fs. Energies are in eV, times at the interface in fs.
inline constexpr double hbar_ev_fs = 0.6582119569;

}  // namespace permsym
