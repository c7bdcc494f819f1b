#pragma once

#include <numbers>

// Physical constants and Si:Bi defaults. All spin Hamiltonian quantities are
// kept in angular frequency (rad/s) internally; Hz / mT / nm appear only at
// I/O boundaries with an explicit 2*pi conversion.
namespace spinbath::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

// Bi donor in Si, literature values (config-overridable).
inline constexpr double bi_hyperfine_a0 = two_pi * 1.4754e9;  // rad/s
inline constexpr double gamma_electron = two_pi * 27.997e9;   // rad/s/T
inline constexpr double gamma_bi209 = two_pi * 6.963e6;       // rad/s/T
inline constexpr double bi_nuclear_spin = 4.5;                // 209Bi, I = 9/2

// 29Si bath. gamma is negative; only gamma^2 enters the dipolar coupling and
// the uniform Zeeman term is dynamics-neutral (tested), so the sign is kept
// for completeness.
inline constexpr double gamma_si29 = -two_pi * 8.465e6;  // rad/s/T
inline constexpr double si29_abundance = 0.047;
inline constexpr double si_lattice_a0 = 5.431e-10;  // m

// mu0/(4 pi) * hbar: the single site where SI units enter the dipolar
// coupling D = dipolar_si * gamma^2 * (3 cos^2 - 1) / (4 R^3).
inline constexpr double mu0_over_4pi = 1e-7;              // T m / A
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double dipolar_si = mu0_over_4pi * hbar;

// Default isotropic hyperfine envelope A(r) = A_max exp(-2 r / r_bohr).
inline constexpr double default_hyperfine_amax = two_pi * 6.0e6;  // rad/s
inline constexpr double default_hyperfine_rbohr = 1.1e-9;         // m

}  // namespace spinbath::constants
