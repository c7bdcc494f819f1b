#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spinbath/constants.hpp"

namespace spinbath {

// Central-spin parameters: electron spin coupled to the host nuclear spin by
// an isotropic contact term, H = w_e S^z - w_n I0^z + a0 S.I0.
struct DonorParams {
  double electron_spin = 0.5;
  double nuclear_spin = constants::bi_nuclear_spin;
  double hyperfine_a0 = constants::bi_hyperfine_a0;  // rad/s
  double gamma_e = constants::gamma_electron;        // rad/s/T
  double gamma_n = constants::gamma_bi209;           // rad/s/T

  int dimension() const {
    return static_cast<int>((2 * electron_spin + 1) * (2 * nuclear_spin + 1) +
                            0.5);
  }
};

// Adiabatic (F, m_F) tag. Within each two-dimensional m_F block the upper
// branch carries F = I + 1/2 and the lower F = I - 1/2 at every field; the
// stretched m_F = -(I+1/2) state is grouped with the lower branch (so for
// I = 9/2 it reads |4,-5> as is conventional for this system).
struct LevelLabel {
  double f = 0;
  double mf = 0;

  bool operator==(const LevelLabel&) const = default;
  std::string str() const;
};

LevelLabel parse_level_label(const std::string& text);  // e.g. "5,-1"

struct Level {
  LevelLabel label;
  double energy = 0;          // rad/s
  double sz = 0;              // <S^z>
  double i0z = 0;             // <I0^z>
  Eigen::VectorXd amplitudes; // over the product basis, see basis_index()
};

struct LevelSet {
  double field = 0;  // tesla
  std::vector<Level> levels;

  const Level& find(const LevelLabel& label) const;
};

// The chosen qubit: a pair of central-spin eigenstates.
struct TransitionPair {
  LevelLabel plus_label;
  LevelLabel minus_label;
  double p_plus = 0;
  double p_minus = 0;
  double p_e = 0;       // |P+ - P-|, qubit-bath scaling factor
  double s = 0;         // |P+| + |P-|, bath back-action factor
  double frequency = 0; // rad/s, E+ - E- > 0
};

struct ClockTransition {
  double field = 0;            // root of df/dB (tesla)
  double field_pe_zero = 0;    // nearby root of P+ - P-
  double difference = 0;       // field - field_pe_zero
};

// Product-basis index for |m_S, m_I>: m_S descending (+1/2 first), m_I
// descending within each electron branch.
int basis_index(const DonorParams& params, double ms, double mi);

// Dense Hamiltonian over the product basis (real symmetric; the transverse
// hyperfine couplings are real). Used for cross-validation of the block path.
Eigen::MatrixXd build_hamiltonian(const DonorParams& params, double field);

// Block-diagonal eigensystem with adiabatic labels. Throws on a degenerate
// same-m_F crossing (cannot happen for a0 > 0 but checked).
LevelSet eigensystem(const DonorParams& params, double field);

TransitionPair transition(const DonorParams& params, double field,
                          const LevelLabel& plus, const LevelLabel& minus);

// Locates df/dB = 0 for the transition via the Hellmann-Feynman derivative
// df/dB = gamma_e (P+ - P-) - gamma_n (<I0z>+ - <I0z>-), to 1e-9 relative.
// Also reports the nearby root of P+ - P-. Throws if df/dB does not change
// sign in [b_lo, b_hi].
ClockTransition find_clock_transition(const DonorParams& params,
                                      const LevelLabel& plus,
                                      const LevelLabel& minus, double b_lo,
                                      double b_hi);

}  // namespace spinbath
