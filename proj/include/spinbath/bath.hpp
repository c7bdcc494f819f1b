#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "spinbath/constants.hpp"

namespace spinbath {

// Magnetic field direction in the crystal frame (unit vector).
class FieldOrientation {
 public:
  FieldOrientation() : axis_(0, 0, 1) {}
  explicit FieldOrientation(const Eigen::Vector3d& axis);

  // Angle theta from [001] rotating towards [110] within the [001]-[110]
  // plane; theta = 0 is [001], ~54.7356 deg is [111], 90 deg is [110].
  static FieldOrientation from_theta_deg(double theta_deg);
  static FieldOrientation from_spec(const std::string& text);  // "001", "theta:30", ...

  const Eigen::Vector3d& axis() const { return axis_; }

 private:
  Eigen::Vector3d axis_;
};

struct LatticeSpec {
  double a0 = constants::si_lattice_a0;   // m
  double cutoff_radius = 4.5e-9;          // m
  double abundance = constants::si29_abundance;
};

// All diamond-lattice sites with 0 < |r| <= cutoff, donor at the origin
// (substitutional, so the origin site itself is excluded). Canonically sorted
// by (|r|^2, x, y, z).
std::vector<Eigen::Vector3d> diamond_sites(const LatticeSpec& spec);

struct IsotropicEnvelope {
  double a_max = constants::default_hyperfine_amax;   // rad/s
  double r_bohr = constants::default_hyperfine_rbohr; // m
};

// Site table loaded from the bath CSV format (x,y,z in nm, A in kHz); every
// queried position must be present.
struct HyperfineTable {
  std::vector<Eigen::Vector3d> positions;  // m
  std::vector<double> couplings;           // rad/s

  static HyperfineTable load(const std::string& path);
};

using HyperfineModel = std::variant<IsotropicEnvelope, HyperfineTable>;

struct BathConfiguration {
  std::uint64_t seed = 0;
  std::vector<Eigen::Vector3d> positions;  // m, donor at origin
  std::vector<double> hyperfine;           // A_i, rad/s
  FieldOrientation orientation;

  std::size_t size() const { return positions.size(); }
};

// Bernoulli(abundance) occupation of the lattice sites; deterministic for a
// fixed (spec, seed). Throws if the cutoff admits no sites.
BathConfiguration generate_bath(const LatticeSpec& spec, std::uint64_t seed,
                                const FieldOrientation& orientation,
                                const HyperfineModel& model = IsotropicEnvelope{});

std::vector<double> hyperfine_map(const std::vector<Eigen::Vector3d>& positions,
                                  const HyperfineModel& model);

// Secular dipolar coupling strength between two bath nuclei,
// D = (mu0 hbar / 4pi) gamma_n^2 (3 cos^2 theta - 1) / (4 |R|^3), in rad/s.
double dipolar_coupling(const Eigen::Vector3d& r_i, const Eigen::Vector3d& r_j,
                        const FieldOrientation& orientation,
                        double gamma_n = constants::gamma_si29);

}  // namespace spinbath
