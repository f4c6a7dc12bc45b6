// Acceptance suite: one PASS/FAIL line per criterion. Usage: acceptance [criterion numbers...]

#include "oracles.hpp"

#include "tnls/config.hpp"
#include "tnls/dynamics.hpp"
#include "tnls/gauges.hpp"
#include "tnls/measure.hpp"
#include "tnls/normal_form.hpp"
#include "tnls/resonance.hpp"
#include "tnls/runner.hpp"
#include "tnls/spectral.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace tnls;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

void detail(const std::string& line) { std::cout << "    " << line << std::endl; }

CVec inverse_decay(std::mt19937_64& rng, int N, double norm) {
  return oracle::random_coeffs(rng, N, [](int n) { return 1.0 / oracle::japanese(n); }, norm);
}

CVec gaussian_envelope(std::mt19937_64& rng, int N, double norm) {
  return oracle::random_coeffs(rng, N, [](int n) { return std::exp(-0.5 * n * n); }, norm);
}

// Criterion 1: expanded vs factored phase on all hyperplane tuples with |n_i| <= 64.
Outcome phase_factorization() {
  const int R = 64;
  double worst = 0.0;
  long tuples = 0;
  for (const char* bs : {"0", "1", "3/2", "2.1"}) {
    const Beta b = Beta::parse(bs);
    for (int n1 = -R; n1 <= R; ++n1)
      for (int n2 = -R; n2 <= R; ++n2)
        for (int n3 = -R; n3 <= R; ++n3) {
          const int n = n1 - n2 + n3;
          if (n < -R || n > R) continue;
          const double e = oracle::phase(n, n1, n2, n3, b.value());
          const double f = phi(FrequencyTuple{n, n1, n2, n3}, b);
          worst = std::max(worst, std::abs(e - f) / std::max(1.0, std::abs(e)));
          ++tuples;
        }
  }
  return {worst <= 1e-9, "max relative difference " + fmt(worst) + " over " + std::to_string(tuples) +
                             " tuples (tolerance 1e-9)"};
}

// Criterion 2: N1 + N2 + N3 against the direct renormalized cubic term.
Outcome partition() {
  std::mt19937_64 rng(2);
  const int N = 16;
  double worst = 0.0;
  bool n3_zero = true;
  for (int trial = 0; trial < 100; ++trial) {
    const CVec c = inverse_decay(rng, N, 2.0);
    const SpectralState s = make_state(N, c, Rep::u, 0.0);
    const CVec full = oracle::triple_sum(c, N) - 2.0 * oracle::mass(c) * c;
    for (const char* bs : {"2.1", "1", "3/2", "3"}) {
      const Beta b = Beta::parse(bs);
      const auto [n1, n2, n3] = split_N123(s, b);
      worst = std::max(worst, (n1.coeffs + n2.coeffs + n3.coeffs - full).cwiseAbs().maxCoeff());
      if (!b.resonant() && n3.coeffs.cwiseAbs().maxCoeff() != 0.0) n3_zero = false;
    }
  }
  return {worst <= 1e-12 && n3_zero, "max coefficient difference " + fmt(worst) +
                                         " (tolerance 1e-12); N3 identically zero for non-resonant beta: " +
                                         (n3_zero ? "yes" : "no")};
}

// Criterion 3: transform products vs direct convolution for N <= 32.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int N = 1; N <= 32; ++N)
    for (int trial = 0; trial < 3; ++trial) {
      const CVec c = inverse_decay(rng, N, 2.0);
      const SpectralState s = make_state(N, c, Rep::u, 0.0);
      const CVec ref = oracle::triple_sum(c, N);
      worst = std::max(worst, (cubic_terms_fft(s, false).coeffs - ref).cwiseAbs().maxCoeff());
      worst = std::max(worst, (cubic_terms_fft(s, true).coeffs - (ref - 2.0 * oracle::mass(c) * c))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  return {worst <= 1e-11, "max coefficient difference " + fmt(worst) + " for N = 1..32 (tolerance 1e-11)"};
}

// Criterion 4: conservation for the original equation.
Outcome conservation() {
  const ModelParams p;
  std::mt19937_64 rng(4);
  const int N = 32;
  double dM = 0.0, dH = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const CVec c0 = gaussian_envelope(rng, N, 1.0);
    const double M0 = oracle::mass(c0), H0 = oracle::hamiltonian(c0, N, p.beta.value());
    evolve_observed(EquationKind::original, make_state(N, c0, Rep::u, 0.0), 1.0, 1e-3, p,
                    [&](long k, const SpectralState& s) {
                      if (k % 10 != 0) return;
                      dM = std::max(dM, std::abs(oracle::mass(s.coeffs) - M0));
                      dH = std::max(dH, std::abs(oracle::hamiltonian(s.coeffs, N, p.beta.value()) - H0) /
                                            std::abs(H0));
                    });
  }
  return {dM <= 1e-8 && dH <= 1e-6,
          "mass drift " + fmt(dM) + " (tolerance 1e-8), Hamiltonian relative drift " + fmt(dH) +
              " (tolerance 1e-6)"};
}

// G^{-1} J^{-1} S(t) written out mode by mode.
CVec to_physical_by_hand(const SpectralState& x, double beta) {
  const int N = x.N();
  CVec c(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    c[n + N] = x[n] * std::exp(cplx(0, -x.time * oracle::phase(n, 0, 0, 0, beta)));
    if (x.rep == Rep::w) c[n + N] *= std::exp(cplx(0, x.time * std::norm(c[n + N])));
  }
  return c * std::exp(cplx(0, -2 * x.time * c.squaredNorm()));
}

// Criterion 5: flow conjugations.
Outcome conjugations() {
  const ModelParams p;
  std::mt19937_64 rng(5);
  const int N = 16;
  const double t = 0.5, dt = 5e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralState u0 = make_state(N, inverse_decay(rng, N, 2.0), Rep::u, 0.0);
    const SpectralState ref = evolve_observed(EquationKind::original, u0, t, dt, p, nullptr);
    for (EquationKind k : {EquationKind::v_form, EquationKind::w_form}) {
      SpectralState s = u0;
      s.rep = rep_for(k);
      const SpectralState end = evolve_observed(k, s, t, dt, p, nullptr);
      worst = std::max(worst, (to_physical_by_hand(end, p.beta.value()) - ref.coeffs).norm());
    }
  }
  return {worst <= 1e-8, "max H^0 distance " + fmt(worst) + " over 20 states and both conjugations (tolerance 1e-8)"};
}

Trajectory subsample(const Trajectory& tr, std::size_t every) {
  Trajectory out{tr.params, tr.kind, {}, {}};
  for (std::size_t i = 0; i < tr.states.size(); i += every) {
    out.times.push_back(tr.times[i]);
    out.states.push_back(tr.states[i]);
  }
  return out;
}

// Criterion 6: normal-form identities and their quadrature order.
Outcome normal_form_identities() {
  const ModelParams p;
  std::mt19937_64 rng(6);
  const int N = 8;
  const double t = 0.1;
  double res_v = 0, res_w1 = 0, res_w2 = 0, cons_v = 0, cons_w = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const CVec c = inverse_decay(rng, N, 2.0);
    const SpectralState v0 = make_state(N, c, Rep::v, 0.0);
    const Trajectory tv = evolve(EquationKind::v_form, v0, t, 1e-4, p, 1);
    const NormalFormTermsV rv = nf_decompose_v(tv, t, p);
    res_v = std::max(res_v, rv.residual);
    // Exact increment of the trajectory against boundary, quintic and resonant terms.
    const CVec kv = tv.states.back().coeffs - c;
    cons_v = std::max(cons_v, (kv - (rv.boundary_t.coeffs - rv.boundary_0.coeffs + rv.quintic_II.coeffs +
                                     rv.quintic_III.coeffs + rv.resonant_integral.coeffs))
                                  .norm());
    const SpectralState w0 = make_state(N, c, Rep::w, 0.0);
    const Trajectory tw = evolve(EquationKind::w_form, w0, t, 1e-4, p, 1);
    const NormalFormTermsW rw = nf_decompose_w(tw, t, p);
    res_w1 = std::max(res_w1, rw.residual_N1);
    res_w2 = std::max(res_w2, rw.residual_N2);
    cons_w = std::max(cons_w, (tw.states.back().coeffs - c - rw.sum_N1().coeffs - rw.sum_N2().coeffs).norm());
  }
  detail("residual v " + fmt(res_v) + ", w/N1 " + fmt(res_w1) + ", w/N2 " + fmt(res_w2) +
         "; trajectory-increment mismatch v " + fmt(cons_v) + ", w " + fmt(cons_w));

  // Residual vs snapshot spacing at a fixed small integration step.
  double worst_ratio_dev = 0.0;
  std::string ratios;
  for (int trial = 0; trial < 3; ++trial) {
    const CVec c = inverse_decay(rng, N, 2.0);
    const Trajectory fv = evolve(EquationKind::v_form, make_state(N, c, Rep::v, 0.0), t, 1.25e-5, p, 1);
    const Trajectory fw = evolve(EquationKind::w_form, make_state(N, c, Rep::w, 0.0), t, 1.25e-5, p, 1);
    std::vector<double> rv, rw;
    for (std::size_t stride : {80u, 40u, 20u}) {
      rv.push_back(nf_decompose_v(subsample(fv, stride), t, p).residual);
      const NormalFormTermsW w = nf_decompose_w(subsample(fw, stride), t, p);
      rw.push_back(std::hypot(w.residual_N1, w.residual_N2));
    }
    for (const auto* r : {&rv, &rw})
      for (int k = 0; k < 2; ++k) {
        const double ratio = (*r)[k] / (*r)[k + 1];
        ratios += fmt(ratio) + " ";
        worst_ratio_dev = std::max(worst_ratio_dev, std::abs(std::log2(ratio) - 4.0));
      }
  }
  detail("residual ratios under spacing halving: " + ratios);
  const bool ok = res_v <= 1e-6 && res_w1 <= 1e-6 && res_w2 <= 1e-6 && cons_v <= 1e-6 && cons_w <= 1e-6 &&
                  worst_ratio_dev <= 0.3;
  return {ok, "50 states, N=8, t=0.1: worst residual " + fmt(std::max({res_v, res_w1, res_w2})) +
                  " (tolerance 1e-6); spacing exponent within " + fmt(worst_ratio_dev) + " of 4 (allowed 0.3)"};
}

// Xi from its defining sum, test side: 2 Im sum_Gamma e^{it(phi + psi)} w1 conj(w2) w3 conj(wn).
double xi_oracle(const CVec& w, int N, int n, double t, const Beta& beta) {
  auto m = [&](int k) { return std::norm(w[k + N]); };
  cplx s = 0;
  for (int n1 = -N; n1 <= N; ++n1)
    for (int n3 = -N; n3 <= N; ++n3) {
      const int n2 = n1 + n3 - n;
      if (n1 == n || n3 == n || n2 < -N || n2 > N || beta.on_shell(n1 + n3)) continue;
      const double theta = oracle::phase(n, n1, n2, n3, beta.value()) - m(n) + m(n1) - m(n2) + m(n3);
      s += std::exp(cplx(0, t * theta)) * w[n1 + N] * std::conj(w[n2 + N]) * w[n3 + N] * std::conj(w[n + N]);
    }
  return 2.0 * s.imag();
}

// Criterion 7: finite-difference d/dt |w_n|^2 against Xi.
Outcome modulus_law() {
  const ModelParams p;
  std::mt19937_64 rng(7);
  const int N = 8;
  double worst_slope_dev = 0.0, lib_vs_oracle = 0.0, fd_at_smallest = 0.0;
  std::string slopes;
  for (int trial = 0; trial < 3; ++trial) {
    const SpectralState w0 = make_state(N, inverse_decay(rng, N, 1.5), Rep::w, 0.0);
    const Trajectory tr = evolve(EquationKind::w_form, w0, 0.34, 1e-5, p, 25);  // snapshots every 2.5e-4
    for (int centre : {400, 800, 1200}) {
      const SpectralState& mid = tr.states[centre];
      std::vector<double> err;
      for (int off : {4, 2, 1}) {
        double e = 0.0;
        for (int n = -N; n <= N; ++n) {
          const double x = xi_oracle(mid.coeffs, N, n, mid.time, p.beta);
          lib_vs_oracle = std::max(lib_vs_oracle, std::abs(x - xi(mid, n, mid.time, p.beta)));
          const double fd =
              (std::norm(tr.states[centre + off][n]) - std::norm(tr.states[centre - off][n])) / (5e-4 * off);
          e = std::max(e, std::abs(fd - x));
        }
        err.push_back(e);
      }
      fd_at_smallest = std::max(fd_at_smallest, err.back());
      for (int k = 0; k < 2; ++k) {
        const double slope = std::log2(err[k] / err[k + 1]);
        slopes += fmt(slope) + " ";
        worst_slope_dev = std::max(worst_slope_dev, std::abs(slope - 2.0));
      }
    }
  }
  detail("observed orders: " + slopes);
  return {worst_slope_dev <= 0.3 && lib_vs_oracle <= 1e-10,
          "finite-difference order within " + fmt(worst_slope_dev) + " of 2 (allowed 0.3); library vs test-side Xi " +
              fmt(lib_vs_oracle) + "; largest error at h=2.5e-4 " + fmt(fd_at_smallest)};
}

// Criterion 8: KS invariance suite and calibration.
Outcome measure_invariance() {
  const ModelParams p;
  const MeasureSpec spec{0.8, 32, 8, 10000};
  const double alpha = 0.01;
  bool ok = true;
  for (MeasureMap m : {MeasureMap::S, MeasureMap::G, MeasureMap::J, MeasureMap::composition}) {
    const InvarianceReport r = invariance_test(m, 0.5, spec, alpha, p);
    detail(std::string(map_name(m)) + ": " + std::to_string(r.rejections_corrected) + " corrected rejections, " +
           std::to_string(r.rejections_raw) + " raw, of " + std::to_string(r.tests) + " tests");
    ok = ok && r.rejections_corrected == 0;
  }
  const CalibrationReport c = calibration_run(spec, alpha, p, 20);
  const bool cal = c.rate >= alpha / 2 && c.rate <= 2 * alpha;
  return {ok && cal, "zero corrected rejections for S, G, J, composition: " + std::string(ok ? "yes" : "no") +
                         "; identity calibration rate " + fmt(c.rate) + " over " + std::to_string(c.tests) +
                         " tests (allowed [0.005, 0.02])"};
}

bool within_growth(const std::vector<QuantileSummary>& q, double tol, std::string& text) {
  bool ok = true;
  for (std::size_t k = 0; k < q.size(); ++k) {
    text += "N=" + std::to_string(q[k].N) + ":" + fmt(q[k].q95) + " ";
    if (k > 0 && q[k].q95 > (1 + tol) * q[k - 1].q95) ok = false;
  }
  return ok;
}

// Criterion 9: smoothing signature across truncations.
Outcome smoothing() {
  const std::vector<int> Ns = {16, 32, 64, 128};
  const StepRule rule;
  ModelParams p1;
  p1.s = 0.8, p1.sigma = 0.29, p1.epsilon = 0.05;
  const SmoothingReport r1 = smoothing_diagnostic(1, 0.5, p1, Ns, MeasureSpec{0.8, 16, 9, 200}, rule);
  std::string t1, ta, tb;
  const bool ok1 = within_growth(r1.q_K, 0.2, t1);
  detail("j=1 q95 of K_1 in H^{1.34}: " + t1);
  ModelParams p0;
  p0.s = 1.2, p0.sigma = 0.6, p0.epsilon = 0.05;
  const SmoothingReport r0 = smoothing_diagnostic(0, 0.5, p0, Ns, MeasureSpec{1.2, 16, 9, 200}, rule);
  const bool oka = within_growth(r0.q_a, 0.2, ta);
  const bool okb = within_growth(r0.q_b, 0.2, tb);
  detail("j=0 q95 of the non-resonant part in H^{2.6}: " + ta);
  detail("j=0 q95 of the resonant part in H^{1.8}: " + tb);
  return {ok1 && oka && okb, std::string("0.95-quantiles non-increasing within 20%: j=1 ") + (ok1 ? "yes" : "no") +
                                 ", j=0 non-resonant " + (oka ? "yes" : "no") + ", j=0 resonant " +
                                 (okb ? "yes" : "no")};
}

// Criterion 10: weighted Hilbert-Schmidt norm and invertibility of Id + DK_1.
Outcome ramer() {
  const ModelParams p;
  const std::vector<int> Ns = {8, 16, 32};
  const int count = 20;
  const StepRule rule;
  std::vector<std::vector<double>> hs(Ns.size(), std::vector<double>(count));
  double smin = 1e300, rich = 0.0, det_dev = 0.0, prod_lo = 1e300, prod_hi = 0.0;
  int below = 0;
  for (std::size_t a = 0; a < Ns.size(); ++a) {
    double mean = 0.0;
    for (int i = 0; i < count; ++i) {
      const RamerReport r = ramer_diagnostic(sample_mu(MeasureSpec{0.8, Ns[a], 10, count}, i), 0.2, 1, p, 1e-5,
                                             rule.dt(Ns[a]));
      hs[a][i] = r.hs_norm;
      mean += r.hs_norm / count;
      smin = std::min(smin, r.min_singular_value);
      rich = std::max(rich, r.richardson_rel);
      if (r.min_singular_value < 0.5) ++below;
      prod_lo = std::min(prod_lo, r.min_singular_value * r.max_singular_value);
      prod_hi = std::max(prod_hi, r.min_singular_value * r.max_singular_value);
      det_dev = std::max(det_dev, std::abs(r.abs_determinant - 1.0));
    }
    detail("N=" + std::to_string(Ns[a]) + ": mean HS norm " + fmt(mean));
  }
  double spread = 1.0;
  for (int i = 0; i < count; ++i) {
    double lo = 1e300, hi = 0;
    for (std::size_t a = 0; a < Ns.size(); ++a) lo = std::min(lo, hs[a][i]), hi = std::max(hi, hs[a][i]);
    spread = std::max(spread, hi / lo);
  }
  const bool hs_ok = spread <= 1.2;
  const bool sv_ok = smin >= 0.5;
  detail("sample-pairs with min singular value below 0.5: " + std::to_string(below) + " of " +
         std::to_string(count * Ns.size()) + "; worst Richardson change " + fmt(rich));
  detail("max ||det(Id + DK)| - 1| " + fmt(det_dev) + "; smin * smax in [" + fmt(prod_lo) + ", " + fmt(prod_hi) +
         "]");
  return {hs_ok && sv_ok, "per-sample HS spread across N " + fmt(spread) + " (allowed 1.2); min singular value " +
                              fmt(smin) + " (required >= 0.5)"};
}

// Criterion 11: self-convergence order of the four integrators.
Outcome integrator_order() {
  const ModelParams p;
  std::mt19937_64 rng(11);
  const int N = 16;
  const double T = 1.0;
  const CVec c = gaussian_envelope(rng, N, 1.0);
  bool ok = true;
  std::string text;
  for (EquationKind k : {EquationKind::original, EquationKind::renormalized, EquationKind::v_form,
                         EquationKind::w_form}) {
    const SpectralState u0 = make_state(N, c, rep_for(k), 0.0);
    const CVec ref = evolve_observed(k, u0, T, 1.25e-4, p, nullptr).coeffs;
    std::vector<double> lx, ly;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      lx.push_back(std::log(dt));
      ly.push_back(std::log((evolve_observed(k, u0, T, dt, p, nullptr).coeffs - ref).norm()));
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 3; ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
    const double slope = sxy / sxx;
    text += std::string(kind_name(k)) + " " + fmt(slope) + ", ";
    ok = ok && std::abs(slope - 4.0) <= 0.3;
  }
  return {ok, "fitted slopes: " + text + "required 4.0 +/- 0.3"};
}

std::map<std::string, std::string> run_and_collect(const std::vector<std::pair<std::string, std::string>>& kv,
                                                   const fs::path& dir, const char* threads) {
  setenv("TNLS_THREADS", threads, 1);
  auto args = kv;
  args.emplace_back("output", dir.string());
  std::ostringstream log;
  fs::remove_all(dir);
  run(parse_config("", args), log);
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename() == "timing.json") continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

// Criterion 12: byte-identical outputs across repeated runs and thread counts.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "tnls_acceptance_determinism";
  const std::vector<std::vector<std::pair<std::string, std::string>>> configs = {
      {{"command", "simulate"}, {"N", "16"}, {"kind", "w_form"}, {"t_final", "0.2"}, {"init", "mu"}, {"seed", "3"}},
      {{"command", "measure"}, {"N", "6"}, {"count", "500"}, {"calibration_replicates", "2"}, {"seed", "4"}},
      {{"command", "smoothing"}, {"N_list", "4,8"}, {"count", "6"}, {"t", "0.1"}, {"seed", "5"}},
      {{"command", "ramer"}, {"N_list", "3,4"}, {"count", "2"}, {"t", "0.05"}, {"seed", "6"}},
      {{"command", "resonance-scan"}, {"N", "10"}, {"beta", "3/2"}},
  };
  bool ok = true;
  long compared = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const fs::path dir = root / std::to_string(i);
    const auto base = run_and_collect(configs[i], dir, "1");
    for (const char* threads : {"1", "2", "4"}) {
      const auto again = run_and_collect(configs[i], dir, threads);
      ok = ok && again == base && !base.empty();
      compared += static_cast<long>(again.size());
    }
  }
  unsetenv("TNLS_THREADS");
  fs::remove_all(root);
  return {ok, std::to_string(compared) + " files compared across repeats with 1, 2 and 4 workers: " +
                  (ok ? "all identical" : "differences found")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"phase factorization", phase_factorization},
      {"nonlinearity partition", partition},
      {"transform vs direct products", oracle_equivalence},
      {"conservation", conservation},
      {"flow conjugations", conjugations},
      {"normal-form identities", normal_form_identities},
      {"per-mode modulus law", modulus_law},
      {"measure invariance", measure_invariance},
      {"smoothing signature", smoothing},
      {"Ramer hypotheses", ramer},
      {"integrator order", integrator_order},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto& [name, fn] = criteria[id - 1];
    std::cout << "criterion " << id << " (" << name << ") running" << std::endl;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " " << name << ": " << o.summary << " ["
              << fmt(secs) << " s]" << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
