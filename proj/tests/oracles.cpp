#include "oracles.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace spinbath::oracles {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using cplx = std::complex<double>;

constexpr cplx kI{0.0, 1.0};

double mval(int basis, int spin) { return (basis >> spin) & 1 ? -0.5 : 0.5; }

// bath Hamiltonian over the full product space: secular dipolar
// D (I+I- + I-I+) + 4 D IzIz, uniform Zeeman, optional per-spin detunings
MatrixXd full_bath_hamiltonian(const BathConfiguration& bath,
                               double bath_zeeman,
                               const std::vector<double>& detunings) {
  const int n = static_cast<int>(bath.size());
  if (n > 12) throw std::runtime_error("oracle bath too large");
  const int dim = 1 << n;
  MatrixXd h = MatrixXd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    double diag = 0;
    for (int l = 0; l < n; ++l) {
      diag -= bath_zeeman * mval(b, l);
      if (!detunings.empty()) diag += detunings[l] * mval(b, l);
    }
    for (int l = 0; l < n; ++l) {
      for (int m = l + 1; m < n; ++m) {
        const double d = dipolar_coupling(bath.positions[l], bath.positions[m],
                                          bath.orientation);
        diag += 4.0 * d * mval(b, l) * mval(b, m);
        if (((b >> l) & 1) == 1 && ((b >> m) & 1) == 0) {
          const int b2 = b ^ (1 << l) ^ (1 << m);
          h(b2, b) += d;
          h(b, b2) += d;
        }
      }
    }
    h(b, b) += diag;
  }
  return h;
}

MatrixXd overhauser_diagonal(const BathConfiguration& bath) {
  const int n = static_cast<int>(bath.size());
  const int dim = 1 << n;
  MatrixXd beta = MatrixXd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    double v = 0;
    for (int l = 0; l < n; ++l) v += bath.hyperfine[l] * mval(b, l);
    beta(b, b) = v;
  }
  return beta;
}

MatrixXcd expm(const MatrixXd& h, double t) {
  const MatrixXcd a = -kI * t * h.cast<cplx>();
  return a.exp();
}

}  // namespace

std::complex<double> brute_force_coherence(
    const BathConfiguration& bath, const TransitionPair& transition,
    const PulseSequence& seq, double t_total, double bath_zeeman,
    const std::vector<double>& frozen_detunings) {
  const MatrixXd hb = full_bath_hamiltonian(bath, bath_zeeman, frozen_detunings);
  const MatrixXd beta = overhauser_diagonal(bath);
  const MatrixXd hp = transition.p_plus * beta + hb;
  const MatrixXd hm = transition.p_minus * beta + hb;

  const int dim = static_cast<int>(hb.rows());
  MatrixXcd up = MatrixXcd::Identity(dim, dim);
  MatrixXcd um = MatrixXcd::Identity(dim, dim);
  double prev = 0;
  int flips = 0;
  auto step = [&](double to) {
    const double dt = (to - prev) * t_total;
    if (dt > 0) {
      up = expm(flips % 2 ? hm : hp, dt) * up;
      um = expm(flips % 2 ? hp : hm, dt) * um;
    }
    prev = to;
  };
  for (double f : seq.fractions) {
    step(f);
    ++flips;
  }
  step(1.0);
  return (um.adjoint() * up).trace() / static_cast<double>(dim);
}

double brute_force_correlation(const BathConfiguration& bath,
                               const TransitionPair& transition, double t,
                               double bath_zeeman) {
  const MatrixXd hb = full_bath_hamiltonian(bath, bath_zeeman, {});
  const MatrixXd beta = overhauser_diagonal(bath);
  const MatrixXd he = 0.5 * transition.s * beta + hb;
  const int dim = static_cast<int>(hb.rows());

  const MatrixXcd u = expm(he, t);  // e^{-i He t}
  const MatrixXcd beta_t = u.adjoint() * beta.cast<cplx>() * u;
  const cplx c = (beta_t * beta.cast<cplx>()).trace() / static_cast<double>(dim);
  return c.real();
}

double pair_oracle_frequency(const BathConfiguration& bath, int i, int j,
                             const TransitionPair& transition) {
  BathConfiguration pair;
  pair.positions = {bath.positions[i], bath.positions[j]};
  pair.hyperfine = {bath.hyperfine[i], bath.hyperfine[j]};
  pair.orientation = bath.orientation;

  const MatrixXd hb = full_bath_hamiltonian(pair, 0.0, {});
  const MatrixXd beta = overhauser_diagonal(pair);
  const MatrixXd he = 0.5 * transition.s * beta + hb;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(he);

  // the flip-flop doublet lives on basis states 0b01 and 0b10
  std::vector<double> flipflop;
  for (int k = 0; k < 4; ++k) {
    const auto v = solver.eigenvectors().col(k);
    const double outside = v(0) * v(0) + v(3) * v(3);
    if (outside < 1e-20) flipflop.push_back(solver.eigenvalues()(k));
  }
  if (flipflop.size() != 2) {
    throw std::runtime_error("pair oracle: flip-flop doublet not isolated");
  }
  return std::abs(flipflop[1] - flipflop[0]);
}

double pair_oracle_amplitude(const BathConfiguration& bath, int i, int j,
                             const TransitionPair& transition) {
  BathConfiguration pair;
  pair.positions = {bath.positions[i], bath.positions[j]};
  pair.hyperfine = {bath.hyperfine[i], bath.hyperfine[j]};
  pair.orientation = bath.orientation;

  const double omega = pair_oracle_frequency(bath, i, j, transition);
  if (omega == 0) return 0;

  // The symmetric Overhauser component commutes with H_e, so only the
  // antisymmetric part delta_beta = (A_i - A_j)(Iz_i - Iz_j)/2 oscillates;
  // correlating it directly avoids subtracting the large static background.
  const MatrixXd hb = full_bath_hamiltonian(pair, 0.0, {});
  const MatrixXd beta = overhauser_diagonal(pair);
  const MatrixXd he = 0.5 * transition.s * beta + hb;
  MatrixXd dbeta = MatrixXd::Zero(4, 4);
  const double half_diff = 0.5 * (pair.hyperfine[0] - pair.hyperfine[1]);
  for (int b = 0; b < 4; ++b) {
    dbeta(b, b) = half_diff * (mval(b, 0) - mval(b, 1));
  }
  auto c_delta = [&](double t) {
    const MatrixXcd u = expm(he, t);
    const MatrixXcd moved = u.adjoint() * dbeta.cast<cplx>() * u;
    return ((moved * dbeta.cast<cplx>()).trace() / 4.0).real();
  };
  return 0.5 * (c_delta(0.0) - c_delta(constants::pi / omega));
}

}  // namespace spinbath::oracles
