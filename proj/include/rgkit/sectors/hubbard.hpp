#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "rgkit/sectors/gevrey.hpp"

namespace rgkit::sectors {

// Coordinates in e+ = (pi/2)(1,1), e- = (pi/2)(-1,1).
struct TiltedMomentum {
  double k0 = 0.0;
  double plus = 0.0;
  double minus = 0.0;
};

TiltedMomentum to_tilted(double k0, double k1, double k2);
void from_tilted(const TiltedMomentum& t, double& k1, double& k2);
// q = k - 1 for k >= 0, q = k + 1 for k < 0.
double fractional_part(double k);

double hubbard_dispersion(double k1, double k2);          // cos k1 + cos k2
double hubbard_dispersion_tilted(double kp, double km);  // 2 cos(pi k+/2) cos(pi k-/2)

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Allowed |q| for sector index s inside slice i.
Window hubbard_sector_support(std::size_t i, std::size_t s, double M);
// Allowed |cos(pi k/2)|.
Window cosine_window(std::size_t i, std::size_t s, double M);

enum class Category { middle_face, face, corner, diagonal, general };

struct SectorInfo {
  std::size_t i = 0;
  std::size_t s_plus = 0;
  std::size_t s_minus = 0;
  long depth = 0;  // s+ + s- - i + 2
  Category category = Category::general;
  bool border = false;  // general or diagonal of depth 0
};

bool sector_nonempty(std::size_t i, std::size_t s_plus, std::size_t s_minus);
// InputError when s > i or the sector is empty (s+ + s- < i - 2).
SectorInfo sector_category(std::size_t i, std::size_t s_plus, std::size_t s_minus);
std::vector<SectorInfo> enumerate_sectors(std::size_t i);
std::string to_string(Category c);

// Connected components of the sector support projected to the (k+, k-) plane, on a
// G x G grid of the torus with the Brillouin-zone identification (k+, k-) ~ (k+ + 2, k- + 2).
std::size_t sector_components(std::size_t i, std::size_t s_plus, std::size_t s_minus, double M, std::size_t grid = 512);

// --- momentum conservation at a vertex ---

struct LegSector {
  std::size_t scale = 0;  // slice index i_j
  std::size_t s_plus = 0;
  std::size_t s_minus = 0;
};
using VertexTuple = std::array<LegSector, 4>;

// One direction: scale i_j and sector index s_j per leg.
using DirectionTuple = std::array<std::array<std::size_t, 2>, 4>;

struct DirectionVerdict {
  bool admissible = false;
  bool single_slice_rule = false;  // two smallest indices differ by at most one
  bool multislice_rule = false;    // or: smallest equals its scale, strictly below the other scales
  std::string clause;
};

struct ConservationVerdict {
  bool admissible = false;
  DirectionVerdict plus;
  DirectionVerdict minus;
};

// Smallest M for which the rule is proven.
double conservation_min_M();

// DomainError when M <= 3 pi / sqrt 2.
DirectionVerdict check_direction(const DirectionTuple& t, double M);
ConservationVerdict check_momentum_conservation(const VertexTuple& t, double M);

// Exact oracle: union over sign patterns of the interval sums of the q windows.
// Returns the integers m with sum q = 2m achievable.
std::vector<long> feasible_offsets(const DirectionTuple& t, double M);
bool feasible(const DirectionTuple& t, double M);
// Grid oracle at spacing h with tolerance 2h, meet in the middle.
bool feasible_grid(const DirectionTuple& t, double M, double h);

// --- curvature of the level curves ---

struct CurvatureSample {
  double k1 = 0.0;
  double k2 = 0.0;
  double R = 0.0;  // curvature radius
  double d = 0.0;  // distance to cos k1 + cos k2 = 0
  double w = 0.0;  // distance to the outer band edge cos k1 + cos k2 = sqrt2 M M^{-j}
  double l = 0.0;  // sqrt(w R)
  double ratio = 0.0;  // l / (M^{-j/2} + k1)
};

// Point on cos k1 + cos k2 = M^{-j}, 0 <= k1 <= pi/2, k2 > 0.
CurvatureSample hubbard_curvature_profile(double k1, int j, double M);
// Off-curve input: InputError unless |(cos k1 + cos k2)^2 - M^{-2j}| <= tol.
CurvatureSample hubbard_curvature_profile(double k1, double k2, int j, double M, double tol = 1e-9);

struct CurvatureBracket {
  double c = 0.0;  // min ratio
  double d = 0.0;  // max ratio
  std::vector<CurvatureSample> samples;
};
CurvatureBracket curvature_bracket(int j, double M, std::size_t samples = 200);

// --- position-space sector propagator ---

struct DecayParams {
  double beta = 1000.0;
  double M = 2.0;
  double alpha = 0.5;
  std::size_t panels = 12;  // Gauss-Legendre panels per support interval
  std::size_t nodes = 8;
};

// Position in (x0, n+, n-) with x+- = (pi/2) n+-.
struct LatticePoint {
  double x0 = 0.0;
  long n_plus = 0;
  long n_minus = 0;
};

double scaled_distance(std::size_t i, std::size_t s_plus, std::size_t s_minus, const LatticePoint& x, double M);

// Evaluates C_{i,sigma} at many points, sharing the frequency/momentum tables.
// DomainError for points whose n+ and n- differ in parity.
std::vector<std::complex<double>> hubbard_sector_propagator(std::size_t i, std::size_t s_plus, std::size_t s_minus,
                                                            const std::vector<LatticePoint>& xs,
                                                            const DecayParams& p);

// (1/16 beta) sum_k0 int |D^(k)|: the sup of |C| over all x is at most this.
double hubbard_sector_l1(std::size_t i, std::size_t s_plus, std::size_t s_minus, const DecayParams& p);

// Near-origin probe set (scaled distance <= 2); C vanishes identically at x = 0.
std::vector<LatticePoint> probe_points(std::size_t i, std::size_t s_plus, std::size_t s_minus, double M);

struct PrefactorRow {
  SectorInfo sector;
  double sup_abs = 0.0;
  double scaled = 0.0;  // sup_abs / M^{-i-l}
  double l1 = 0.0;
  double l1_scaled = 0.0;
};

struct PrefactorReport {
  std::vector<PrefactorRow> rows;
  double band() const;  // max scaled / min scaled
  double l1_band() const;
  // Band restricted to sectors that are not border sectors.
  double interior_band() const;
};

PrefactorReport prefactor_sweep(std::size_t i, const DecayParams& p);

struct DecayFit {
  std::vector<double> distance;  // d_{i,sigma}
  std::vector<double> abs_value;
  double slope = 0.0;  // of log|C| against d^alpha
  double intercept = 0.0;
};

DecayFit decay_fit(std::size_t i, std::size_t s_plus, std::size_t s_minus, const DecayParams& p,
                   std::size_t samples = 20, double d_max = 12.0);

}  // namespace rgkit::sectors
