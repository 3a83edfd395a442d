#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rgkit::sectors {

// k0 = (2n+1) pi / beta for n in [-n_window, n_window).
std::vector<double> matsubara_frequencies(double beta, long n_window);

// Frequencies with k0^2 <= k0_max^2 (those reached by a compactly supported slice).
std::vector<double> matsubara_frequencies_below(double beta, double k0_max);

struct MatsubaraSum {
  std::complex<double> partial;    // (1/beta) sum_{-N-1 <= n <= N} e^{-i k0 tau} / (i k0 - e)
  std::complex<double> corrected;  // partial plus the exact tail of the leading 1/(i k0) term
  double error_bound = 0.0;        // bound on the remaining |e|/k0^2 tail
};

// 0 < tau < beta. The closed form is -e^{-e tau} / (1 + e^{-beta e}).
MatsubaraSum matsubara_sum(double beta, double e, double tau, long n_cut);
double matsubara_closed_form(double beta, double e, double tau);

}  // namespace rgkit::sectors
