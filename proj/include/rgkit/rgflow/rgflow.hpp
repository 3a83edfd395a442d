#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rgkit::rgflow {

struct SliceParams {
  double M = 2.0;
  std::size_t rho = 8;  // deepest slice index
  double m2 = 1.0;
  double d = 4.0;
  double rel_tol = 1e-12;
};

// C_i(r) = int e^{-m^2 a - r^2/(4a)} a^{-d/2} da over [M^{-2i}, M^{-2(i-1)}], and [1, inf) for i = 0.
double slice_propagator(std::size_t i, double r, const SliceParams& p);
// C_kappa(r): the same integrand over [kappa, inf). DomainError for kappa <= 0.
double cutoff_propagator(double r, double kappa, const SliceParams& p);
// sum_{i=0}^{rho} C_i(r).
double sliced_sum(double r, const SliceParams& p);

struct SliceBound {
  std::size_t i = 0;
  double K = 0.0;      // sup_r C_i(r) M^{-(d-2)i} e^{M^i r}
  double r_star = 0.0; // maximizer
};

SliceBound slice_bound(std::size_t i, const SliceParams& p);

// Least-squares slope of log C_kappa(r) over [r_lo, r_hi].
double decay_slope(double kappa, double r_lo, double r_hi, std::size_t points, const SliceParams& p);

enum class Direction { upward, downward };
enum class FlowKind { stable_phi4, asymptotically_free };

struct Trajectory {
  FlowKind kind = FlowKind::stable_phi4;
  Direction direction = Direction::upward;
  double beta = 0.0;
  double gamma = 0.0;
  std::vector<double> lambda;
  // stable phi^4, upward
  bool blowup = false;
  std::size_t blowup_index = 0;      // first i with lambda_i > threshold
  std::size_t index_above_1e3 = 0;   // first i with lambda_i > 1e3 (0 if never)
  double predicted_index = 0.0;      // 1/(beta lambda_ren)
  // asymptotically free
  std::vector<double> second_order;  // lambda_0/(1 + lambda_0 beta i)
  std::vector<double> third_order;   // lambda_0/(1 + lambda_0 (beta i + gamma log i))
};

// Upward: lambda_i = lambda_{i-1} + beta lambda_{i-1}^2 from lambda_0 = lambda (renormalized).
// Downward: starts from the bare coupling lambda at i = steps and inverts the step exactly.
// Iteration stops once lambda exceeds max(threshold, 1e3).
Trajectory flow_stable_phi4(double lambda, double beta, std::size_t steps, double threshold = 1.0,
                            Direction direction = Direction::upward);

// 1/lambda_i = 1/lambda_{i-1} + beta + gamma log(i/(i-1)), solved exactly per step.
Trajectory flow_asymptotically_free(double lambda0, double beta, double gamma, std::size_t steps);

struct RenormalonRow {
  std::size_t n = 0;
  double value = 0.0;        // I_n = 2 pi^2 int (log q)^n q^3 dq / (q^2 + m^2)^3
  double ratio = 0.0;        // I_n / (n I_{n-1}), n >= 1
  double plain_value = 0.0;  // same integral without the log factor
  double plain_ratio = 0.0;  // plain_n / (n plain_{n-1})
};

// Guard: n_max <= 20.
std::vector<RenormalonRow> renormalon_growth(std::size_t n_max, double m2);

// Largest relative step |r_n - r_{n-1}|/r_n over n in [lo, hi].
double plateau_drift(const std::vector<RenormalonRow>& rows, std::size_t lo, std::size_t hi);

// One-loop coefficient estimate sum_{j, j' >= i, min = i} int d^4y C_j C_j' (d = 4), truncated at i + extra.
double bubble_beta_estimate(std::size_t i, const SliceParams& p, std::size_t extra = 8);

std::string to_string(FlowKind k);
std::string to_string(Direction d);

}  // namespace rgkit::rgflow
