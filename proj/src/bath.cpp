#include "spinbath/bath.hpp"

#include <algorithm>
#include <cmath>

#include "spinbath/csv.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/rng.hpp"

namespace spinbath {

FieldOrientation::FieldOrientation(const Eigen::Vector3d& axis) {
  const double n = axis.norm();
  if (n < 1e-300) throw ConfigError("field orientation must be a nonzero vector");
  axis_ = axis / n;
}

FieldOrientation FieldOrientation::from_theta_deg(double theta_deg) {
  const double th = theta_deg * constants::pi / 180.0;
  const double s = std::sin(th) / std::sqrt(2.0);
  return FieldOrientation(Eigen::Vector3d(s, s, std::cos(th)));
}

FieldOrientation FieldOrientation::from_spec(const std::string& text) {
  if (text == "001") return FieldOrientation(Eigen::Vector3d(0, 0, 1));
  if (text == "110") return FieldOrientation(Eigen::Vector3d(1, 1, 0));
  if (text == "111") return FieldOrientation(Eigen::Vector3d(1, 1, 1));
  if (text.rfind("theta:", 0) == 0) {
    try {
      return from_theta_deg(std::stod(text.substr(6)));
    } catch (const std::exception&) {
      throw ConfigError("bad orientation angle: " + text);
    }
  }
  // "x,y,z" components
  const auto c1 = text.find(',');
  const auto c2 = text.find(',', c1 + 1);
  if (c1 != std::string::npos && c2 != std::string::npos) {
    try {
      return FieldOrientation(Eigen::Vector3d(std::stod(text.substr(0, c1)),
                                              std::stod(text.substr(c1 + 1, c2 - c1 - 1)),
                                              std::stod(text.substr(c2 + 1))));
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown orientation spec: " + text);
}

std::vector<Eigen::Vector3d> diamond_sites(const LatticeSpec& spec) {
  if (spec.cutoff_radius <= 0) throw ConfigError("cutoff_radius must be > 0");
  if (spec.abundance <= 0 || spec.abundance > 1) {
    throw ConfigError("abundance must be in (0, 1]");
  }
  const double a = spec.a0;
  const double r2max = spec.cutoff_radius * spec.cutoff_radius;
  const int n = static_cast<int>(std::ceil(spec.cutoff_radius / a)) + 1;

  // conventional cubic cell: fcc plus the (1/4,1/4,1/4) sublattice
  static const double basis[8][3] = {
      {0.00, 0.00, 0.00}, {0.00, 0.50, 0.50}, {0.50, 0.00, 0.50},
      {0.50, 0.50, 0.00}, {0.25, 0.25, 0.25}, {0.25, 0.75, 0.75},
      {0.75, 0.25, 0.75}, {0.75, 0.75, 0.25}};

  std::vector<Eigen::Vector3d> sites;
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      for (int k = -n; k <= n; ++k) {
        for (const auto& b : basis) {
          const Eigen::Vector3d r((i + b[0]) * a, (j + b[1]) * a, (k + b[2]) * a);
          const double r2 = r.squaredNorm();
          if (r2 > 1e-24 && r2 <= r2max) sites.push_back(r);
        }
      }
    }
  }
  std::sort(sites.begin(), sites.end(),
            [](const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
              const double ru = u.squaredNorm();
              const double rv = v.squaredNorm();
              if (ru != rv) return ru < rv;
              if (u.x() != v.x()) return u.x() < v.x();
              if (u.y() != v.y()) return u.y() < v.y();
              return u.z() < v.z();
            });
  return sites;
}

HyperfineTable HyperfineTable::load(const std::string& path) {
  HyperfineTable table;
  for (const auto& row : csv::read_rows(path, 4)) {
    table.positions.emplace_back(row[0] * 1e-9, row[1] * 1e-9, row[2] * 1e-9);
    table.couplings.push_back(row[3] * 1e3 * constants::two_pi);
  }
  return table;
}

namespace {

double table_lookup(const HyperfineTable& table, const Eigen::Vector3d& r) {
  // sites are on-lattice; a ~0.01 nm tolerance is unambiguous
  constexpr double tol2 = 1e-22;
  for (std::size_t i = 0; i < table.positions.size(); ++i) {
    if ((table.positions[i] - r).squaredNorm() < tol2) return table.couplings[i];
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "hyperfine table has no entry at (%g, %g, %g) nm",
                r.x() * 1e9, r.y() * 1e9, r.z() * 1e9);
  throw ConfigError(buf);
}

}  // namespace

std::vector<double> hyperfine_map(const std::vector<Eigen::Vector3d>& positions,
                                  const HyperfineModel& model) {
  std::vector<double> a(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double r = positions[i].norm();
    if (r < 1e-300) throw ConfigError("bath site at the donor origin");
    if (const auto* env = std::get_if<IsotropicEnvelope>(&model)) {
      a[i] = env->a_max * std::exp(-2.0 * r / env->r_bohr);
    } else {
      a[i] = table_lookup(std::get<HyperfineTable>(model), positions[i]);
    }
  }
  return a;
}

BathConfiguration generate_bath(const LatticeSpec& spec, std::uint64_t seed,
                                const FieldOrientation& orientation,
                                const HyperfineModel& model) {
  const auto sites = diamond_sites(spec);
  if (sites.empty()) throw ConfigError("cutoff_radius admits no lattice sites");

  RandomStream rng(child_seed(seed, SeedPurpose::bath_placement, 0));
  BathConfiguration bath;
  bath.seed = seed;
  bath.orientation = orientation;
  for (const auto& site : sites) {
    if (rng.bernoulli(spec.abundance)) bath.positions.push_back(site);
  }
  bath.hyperfine = hyperfine_map(bath.positions, model);
  return bath;
}

double dipolar_coupling(const Eigen::Vector3d& r_i, const Eigen::Vector3d& r_j,
                        const FieldOrientation& orientation, double gamma_n) {
  const Eigen::Vector3d rel = r_i - r_j;
  const double r = rel.norm();
  if (r < 1e-300) throw ConfigError("dipolar coupling of coincident sites");
  const double c = rel.dot(orientation.axis()) / r;
  return constants::dipolar_si * gamma_n * gamma_n * (3.0 * c * c - 1.0) /
         (4.0 * r * r * r);
}

}  // namespace spinbath
