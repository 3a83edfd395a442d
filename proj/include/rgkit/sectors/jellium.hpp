#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace rgkit::sectors {

// e(k) = |k|^2 / (2 m*) - mu.
double jellium_dispersion(const std::vector<double>& k, double m_star, double mu);
double fermi_radius(double m_star, double mu);

enum class SectorMode { isotropic, anisotropic };

// Angular sectors of the unit Fermi circle (dim 2) or sphere (dim 3) at scale j.
struct SectorGrid {
  std::size_t dim = 2;
  int j = 0;
  double M = 2.0;
  SectorMode mode = SectorMode::isotropic;
  std::vector<std::array<double, 3>> centres;  // unit vectors, z = 0 in 2D
  double radius = 0.0;                         // max distance from a centre to a point of its sector
};

// 2D isotropic: ceil(2 pi M^j) arcs; anisotropic: ceil(2 pi M^{j/2}) arcs.
// 3D: ceil(pi M^j) polar bands, band b cut into ceil(2 pi sin(theta_b) M^j) pieces.
SectorGrid make_sector_grid(std::size_t dim, int j, double M, SectorMode mode = SectorMode::isotropic);

struct CountOptions {
  double c_tol = 1.0;
  long m = 0;
  std::size_t threads = 1;
};

struct CountResult {
  std::size_t dim = 2;
  int j = 0;
  std::size_t sectors = 0;
  double reach = 0.0;  // R = 4 rho + c_tol (1 + |m|) M^{-j}
  double count = 0.0;  // ordered 4-tuples with |sum of centres| <= R
  double bound = 0.0;  // M^{2j}(1+j) in 2D, M^{5j} in 3D
};

// Guards: j <= 7 in 2D, j <= 4 in 3D.
CountResult count_conserving_tuples(std::size_t dim, int j, double M, const CountOptions& opt = {},
                                    SectorMode mode = SectorMode::isotropic);

struct SlopeFit {
  std::vector<CountResult> rows;
  double slope = 0.0;  // of log_M count against j
  double intercept = 0.0;
};

SlopeFit fit_count_slope(std::size_t dim, int j_lo, int j_hi, double M, const CountOptions& opt = {},
                         SectorMode mode = SectorMode::isotropic);

// --- rhombus rule ---

using Vec2 = std::array<double, 2>;

enum class RhombusClass { paired, degenerate, unpaired };

struct RhombusWitness {
  RhombusClass cls = RhombusClass::unpaired;
  int pairing = -1;  // 0: (12)(34), 1: (13)(24), 2: (14)(23)
  double residual = 0.0;  // best pairing: max of the two pair-sum norms
  bool cooper = false;    // some two legs have total momentum within the pairing threshold
};

// InputError if some |p| differs from k_F by more than tol or |sum p| > 4 tol.
// Pairing and collinearity are judged at threshold sqrt(tol) (relative to k_F).
RhombusWitness rhombus_witness(const std::array<Vec2, 4>& p, double k_f, double tol);
std::string to_string(RhombusClass c);

struct RhombusSweepRow {
  double tol = 0.0;
  std::size_t samples = 0;
  double unpaired_fraction = 0.0;
  double degenerate_fraction = 0.0;
};

// Random on-shell tuples conserving momentum up to O(tol).
std::vector<RhombusSweepRow> rhombus_sweep(const std::vector<double>& tols, std::size_t samples, unsigned long seed);

}  // namespace rgkit::sectors
