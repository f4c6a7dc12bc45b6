#pragma once

#include "tnls/types.hpp"

#include <array>
#include <iosfwd>
#include <tuple>

namespace tnls {

struct FrequencyTuple {
  long n = 0, n1 = 0, n2 = 0, n3 = 0;

  bool on_hyperplane() const { return n == n1 - n2 + n3; }
  // Throws ContractError unless n = n1 - n2 + n3.
  static FrequencyTuple make(long n, long n1, long n2, long n3);
};

struct PhaseBoundReport {
  double phi = 0.0;
  long n_max = 0;
  double lambda = 0.0;
  double Lambda = 0.0;
  bool case_i_holds = false;
  bool case_ii_holds = false;
  bool comparable = false;
};

constexpr double kPhaseConstant = 0.125;
constexpr double kComparableFactor = 4.0;

double phi_expanded(const FrequencyTuple& t, double beta);
// Factored form 3(n-n1)(n-n3)(n1+n3-2beta/3), cross-checked against the expanded form.
double phi(const FrequencyTuple& t, const Beta& beta);
bool gamma_contains(const FrequencyTuple& t, const Beta& beta);
PhaseBoundReport phase_bounds(const FrequencyTuple& t, const Beta& beta, double c = kPhaseConstant,
                              double comparable_factor = kComparableFactor);
double psi(const FrequencyTuple& t, const SpectralState& state);

// (N1, N2, N3): Gamma-sum, minus the diagonal, resonant shell.
std::tuple<SpectralState, SpectralState, SpectralState> split_N123(const SpectralState& state,
                                                                    const Beta& beta);

// Calls f(n, n1, n2, n3, phi) for every tuple of Gamma(n) with all four modes in [-N, N],
// ordered by n, then n1, then n3.
template <class F>
void for_each_gamma(int N, const Beta& beta, F&& f) {
  const double shell = beta.shell();
  for (int n = -N; n <= N; ++n)
    for (int n1 = -N; n1 <= N; ++n1) {
      if (n1 == n) continue;
      for (int n3 = -N; n3 <= N; ++n3) {
        const int n2 = n1 + n3 - n;
        if (n3 == n || n2 < -N || n2 > N || beta.on_shell(n1 + n3)) continue;
        f(n, n1, n2, n3, 3.0 * double(n - n1) * double(n - n3) * (double(n1 + n3) - shell));
      }
    }
}

struct ResonanceScanSummary {
  int N = 0;
  long tuples = 0;
  long case_i = 0, case_ii = 0, both = 0, neither = 0;
  double c_star = 0.0;     // min over tuples of the better of the two lower-bound ratios
  double c_star_i = 0.0;   // min of |phi| / (n_max^2 lambda)
  double c_star_ii = 0.0;  // min of |phi| / (n_max Lambda) over comparable tuples
  FrequencyTuple argmin;
};

// Brute-force scan of Gamma(n) tuples with |n_i| <= N. Rows are written to `csv` when given.
ResonanceScanSummary resonance_scan(int N, const Beta& beta, double c = kPhaseConstant,
                                    double comparable_factor = kComparableFactor,
                                    std::ostream* csv = nullptr);

}  // namespace tnls
