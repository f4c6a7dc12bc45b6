#include "tnls/resonance.hpp"

#include "tnls/parallel.hpp"
#include "tnls/spectral.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tnls {

FrequencyTuple FrequencyTuple::make(long n, long n1, long n2, long n3) {
  FrequencyTuple t{n, n1, n2, n3};
  if (!t.on_hyperplane())
    throw ContractError("tuple (" + std::to_string(n) + "," + std::to_string(n1) + "," +
                        std::to_string(n2) + "," + std::to_string(n3) +
                        ") violates n = n1 - n2 + n3");
  return t;
}

double phi_expanded(const FrequencyTuple& t, double beta) {
  auto p = [beta](long k) {
    const double x = static_cast<double>(k);
    return x * x * x - beta * x * x;
  };
  return p(t.n) - p(t.n1) + p(t.n2) - p(t.n3);
}

namespace {

double phi_scale(const FrequencyTuple& t, double beta) {
  double acc = 1.0;
  for (long k : {t.n, t.n1, t.n2, t.n3}) {
    const double x = static_cast<double>(k);
    acc += std::abs(x * x * x) + std::abs(beta * x * x);
  }
  return acc;
}

}  // namespace

double phi(const FrequencyTuple& t, const Beta& beta) {
  if (!t.on_hyperplane()) (void)FrequencyTuple::make(t.n, t.n1, t.n2, t.n3);
  const double f = 3.0 * double(t.n - t.n1) * double(t.n - t.n3) * (double(t.n1 + t.n3) - beta.shell());
  const double e = phi_expanded(t, beta.value());
  if (std::abs(f - e) > 1e-9 * phi_scale(t, beta.value()))
    throw ContractError("factored and expanded phase disagree");
  return f;
}

bool gamma_contains(const FrequencyTuple& t, const Beta& beta) {
  if (!t.on_hyperplane()) (void)FrequencyTuple::make(t.n, t.n1, t.n2, t.n3);
  return t.n != t.n1 && t.n != t.n3 && !beta.on_shell(t.n1 + t.n3);
}

PhaseBoundReport phase_bounds(const FrequencyTuple& t, const Beta& beta, double c,
                              double comparable_factor) {
  if (!gamma_contains(t, beta)) throw ContractError("phase_bounds requires a tuple in Gamma(n)");
  PhaseBoundReport r;
  r.phi = phi(t, beta);
  const double a = std::abs(double(t.n - t.n1));
  const double b = std::abs(double(t.n - t.n3));
  const double d = std::abs(double(t.n1 + t.n3) - beta.shell());
  r.lambda = std::min({a, b, d});
  r.Lambda = std::min({a * b, b * d, a * d});
  r.n_max = std::max({std::labs(t.n), std::labs(t.n1), std::labs(t.n2), std::labs(t.n3)});
  const double nmax = static_cast<double>(r.n_max);
  r.comparable = true;
  for (long k : {t.n, t.n1, t.n2, t.n3})
    if (comparable_factor * japanese(double(k)) < nmax) r.comparable = false;
  const double aphi = std::abs(r.phi);
  r.case_i_holds = aphi >= c * nmax * nmax * r.lambda;
  r.case_ii_holds = r.comparable && aphi >= c * nmax * r.Lambda;
  return r;
}

double psi(const FrequencyTuple& t, const SpectralState& state) {
  auto m = [&](long k) {
    if (!state.grid.contains(k))
      throw IndexError("frequency " + std::to_string(k) + " outside the grid");
    return std::norm(state[static_cast<int>(k)]);
  };
  return -m(t.n) + m(t.n1) - m(t.n2) + m(t.n3);
}

std::tuple<SpectralState, SpectralState, SpectralState> split_N123(const SpectralState& state,
                                                                    const Beta& beta) {
  SpectralState n1 = cubic_terms_direct(state, TripleFilter::gamma, beta);
  SpectralState n2 = cubic_terms_direct(state, TripleFilter::diagonal, beta);
  n2.coeffs = -n2.coeffs;
  SpectralState n3 = cubic_terms_direct(state, TripleFilter::resonant_shell, beta);
  return {std::move(n1), std::move(n2), std::move(n3)};
}

ResonanceScanSummary resonance_scan(int N, const Beta& beta, double c, double comparable_factor,
                                    std::ostream* csv) {
  if (N < 1) throw ValidationError("scan radius N must be positive");
  struct Partial {
    ResonanceScanSummary s;
    std::string rows;
  };
  std::vector<Partial> parts(2 * N + 1);
  const double inf = std::numeric_limits<double>::infinity();
  parallel_for(parts.size(), [&](std::size_t k) {
    const int n = static_cast<int>(k) - N;
    Partial& p = parts[k];
    p.s.c_star = p.s.c_star_i = p.s.c_star_ii = inf;
    std::ostringstream rows;
    rows << std::setprecision(17);
    for (int n1 = -N; n1 <= N; ++n1)
      for (int n3 = -N; n3 <= N; ++n3) {
        const int n2 = n1 + n3 - n;
        if (n2 < -N || n2 > N) continue;
        const FrequencyTuple t{n, n1, n2, n3};
        if (!gamma_contains(t, beta)) continue;
        const PhaseBoundReport r = phase_bounds(t, beta, c, comparable_factor);
        const double nmax = static_cast<double>(r.n_max);
        const double ri = std::abs(r.phi) / (nmax * nmax * r.lambda);
        const double rii = r.comparable ? std::abs(r.phi) / (nmax * r.Lambda) : 0.0;
        const double best = std::max(ri, rii);
        ++p.s.tuples;
        if (r.case_i_holds && r.case_ii_holds) ++p.s.both;
        else if (r.case_i_holds) ++p.s.case_i;
        else if (r.case_ii_holds) ++p.s.case_ii;
        else ++p.s.neither;
        p.s.c_star_i = std::min(p.s.c_star_i, ri);
        if (r.comparable) p.s.c_star_ii = std::min(p.s.c_star_ii, rii);
        if (best < p.s.c_star) {
          p.s.c_star = best;
          p.s.argmin = t;
        }
        if (csv) {
          const char* label = r.case_i_holds ? (r.case_ii_holds ? "both" : "i")
                                             : (r.case_ii_holds ? "ii" : "none");
          rows << n << ',' << n1 << ',' << n2 << ',' << n3 << ',' << r.phi << ',' << r.lambda << ','
               << r.Lambda << ',' << label << '\n';
        }
      }
    p.rows = rows.str();
  });
  ResonanceScanSummary out;
  out.N = N;
  out.c_star = out.c_star_i = out.c_star_ii = inf;
  if (csv) *csv << "n,n1,n2,n3,phi,lambda,Lambda,case\n";
  for (const Partial& p : parts) {
    out.tuples += p.s.tuples;
    out.case_i += p.s.case_i;
    out.case_ii += p.s.case_ii;
    out.both += p.s.both;
    out.neither += p.s.neither;
    out.c_star_i = std::min(out.c_star_i, p.s.c_star_i);
    out.c_star_ii = std::min(out.c_star_ii, p.s.c_star_ii);
    if (p.s.c_star < out.c_star) {
      out.c_star = p.s.c_star;
      out.argmin = p.s.argmin;
    }
    if (csv) *csv << p.rows;
  }
  return out;
}

}  // namespace tnls
