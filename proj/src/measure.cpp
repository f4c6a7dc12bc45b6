#include "tnls/measure.hpp"

#include "tnls/dynamics.hpp"
#include "tnls/gauges.hpp"
#include "tnls/normal_form.hpp"
#include "tnls/parallel.hpp"
#include "tnls/spectral.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace tnls {

namespace {

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

cplx standard_complex_gaussian(std::uint64_t seed, long index, int n) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(idx), hi32(idx),
                    static_cast<std::uint32_t>(static_cast<std::int32_t>(n))};
  std::uint32_t key[2];
  seq.generate(key, key + 2);
  std::mt19937_64 engine((static_cast<std::uint64_t>(key[0]) << 32) | key[1]);
  std::normal_distribution<double> normal;
  const double re = normal(engine);
  const double im = normal(engine);
  return {re, im};
}

// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 1.18) {
    const double pi = std::numbers::pi;
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) sum += std::pow(y, (2.0 * k - 1) * (2.0 * k - 1));
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

Eigen::VectorXd weights(int N, double s) {
  Eigen::VectorXd w(2 * N + 1);
  for (int n = -N; n <= N; ++n) w[n + N] = std::pow(1.0 + double(n) * n, s);
  return w;
}

double weighted_norm(const CVec& c, const Eigen::VectorXd& w2) {
  return std::sqrt(w2.dot(c.cwiseAbs2()));
}

std::vector<QuantileSummary> summarize(const std::vector<SmoothingRow>& rows,
                                       const std::vector<int>& N_list,
                                       double SmoothingRow::*field) {
  std::vector<QuantileSummary> out;
  for (int N : N_list) {
    std::vector<double> x;
    for (const SmoothingRow& r : rows)
      if (r.N == N) x.push_back(r.*field);
    QuantileSummary q;
    q.N = N;
    if (!x.empty()) {
      q.q50 = quantile(x, 0.5);
      q.q95 = quantile(x, 0.95);
      q.max = *std::max_element(x.begin(), x.end());
    }
    out.push_back(q);
  }
  return out;
}

}  // namespace

void MeasureSpec::validate() const {
  if (!(s > 0.5)) throw ValidationError("measure regularity s must exceed 1/2");
  if (N < 1) throw ValidationError("measure truncation N must be positive");
  if (count < 1) throw ValidationError("sample count must be >= 1");
}

SpectralState sample_mu(const MeasureSpec& spec, long index) {
  spec.validate();
  if (index < 0) throw ContractError("sample index must be nonnegative");
  const int N = spec.N;
  CVec c = gaussian_coefficients(spec.seed, index, N);
  for (int n = -N; n <= N; ++n) c[n + N] /= std::pow(japanese(n), spec.s);
  return make_state(N, c, Rep::u, 0.0);
}

CVec gaussian_coefficients(std::uint64_t seed, long index, int N) {
  if (index < 0) throw ContractError("sample index must be nonnegative");
  if (N < 1) throw ValidationError("truncation N must be positive");
  CVec c(2 * N + 1);
  for (int n = -N; n <= N; ++n) c[n + N] = standard_complex_gaussian(seed, index, n);
  return c;
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw ContractError("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ContractError("KS test needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

const char* map_name(MeasureMap m) {
  switch (m) {
    case MeasureMap::identity: return "identity";
    case MeasureMap::S: return "S";
    case MeasureMap::G: return "G";
    case MeasureMap::J: return "J";
    case MeasureMap::composition: return "composition";
  }
  return "?";
}

MeasureMap map_from_name(const std::string& s) {
  for (MeasureMap m : {MeasureMap::identity, MeasureMap::S, MeasureMap::G, MeasureMap::J,
                       MeasureMap::composition})
    if (s == map_name(m)) return m;
  throw ValidationError("unknown map '" + s + "' (expected identity, S, G, J, composition)");
}

CVec apply_map(MeasureMap m, const CVec& c, double t, const ModelParams& params) {
  const int N = static_cast<int>(c.size() - 1) / 2;
  const double beta = params.beta.value();
  switch (m) {
    case MeasureMap::identity: return c;
    case MeasureMap::S: return c.cwiseProduct(propagator_phases(N, t, beta));
    case MeasureMap::G: return apply_G(c, t);
    case MeasureMap::J: return apply_J(c, t);
    case MeasureMap::composition:
      return apply_J(apply_G(c, 0.3), 0.7).cwiseProduct(propagator_phases(N, 1.0, beta));
  }
  return c;
}

InvarianceReport invariance_test(MeasureMap map, double t, const MeasureSpec& spec, double alpha,
                                 const ModelParams& params, long offset) {
  spec.validate();
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("alpha must lie in (0, 1)");
  const int N = spec.N;
  const int D = 2 * N + 1;
  const auto count = static_cast<std::size_t>(spec.count);
  InvarianceReport r;
  r.map_name = map_name(map);
  r.t = t;
  r.alpha = alpha;
  r.count = spec.count;
  r.tests = 3 * D;
  if (spec.count < 100)
    r.warnings.push_back("count < 100: the KS tests have little power at this ensemble size");

  std::vector<CVec> mapped(count), reference(count);
  parallel_for(count, [&](std::size_t i) {
    mapped[i] = apply_map(map, sample_mu(spec, offset + static_cast<long>(i)).coeffs, t, params);
    reference[i] = sample_mu(spec, offset + spec.count + static_cast<long>(i)).coeffs;
  });
  r.re.resize(D);
  r.im.resize(D);
  r.modulus.resize(D);
  parallel_for(static_cast<std::size_t>(D), [&](std::size_t k) {
    std::vector<double> a(count), b(count);
    auto column = [&](auto f) {
      for (std::size_t i = 0; i < count; ++i) {
        a[i] = f(mapped[i][k]);
        b[i] = f(reference[i][k]);
      }
      return ks_two_sample(a, b);
    };
    r.re[k] = column([](cplx z) { return z.real(); });
    r.im[k] = column([](cplx z) { return z.imag(); });
    r.modulus[k] = column([](cplx z) { return std::abs(z); });
  });
  const double corrected = alpha / r.tests;
  for (int k = 0; k < D; ++k) {
    for (const KsResult* x : {&r.re[k], &r.im[k], &r.modulus[k]}) {
      if (x->p_value < alpha) ++r.rejections_raw;
      if (x->p_value < corrected) ++r.rejections_corrected;
    }
    if (r.modulus[k].p_value < corrected) ++r.modulus_rejections_corrected;
  }
  return r;
}

CalibrationReport calibration_run(const MeasureSpec& spec, double alpha, const ModelParams& params,
                                  int replicates) {
  if (replicates < 1) throw ValidationError("calibration needs at least one replicate");
  CalibrationReport c;
  c.replicates = replicates;
  for (int k = 0; k < replicates; ++k) {
    const InvarianceReport r =
        invariance_test(MeasureMap::identity, 0.0, spec, alpha, params, 2L * spec.count * k);
    c.tests += r.tests;
    c.rejections_raw += r.rejections_raw;
  }
  c.rate = static_cast<double>(c.rejections_raw) / static_cast<double>(c.tests);
  return c;
}

double StepRule::dt(int N) const {
  if (!(dt_max > 0) || !(phase_step > 0)) throw ValidationError("step rule entries must be positive");
  return std::min(dt_max, phase_step / (3.0 * double(N) * N));
}

SmoothingReport smoothing_diagnostic(int j, double t, const ModelParams& params,
                                     const std::vector<int>& N_list, const MeasureSpec& spec,
                                     const StepRule& rule) {
  const double sigma = params.sigma;
  if (j == 0 && !(sigma > 0.5))
    throw ContractError("the v-side smoothing estimate assumes sigma > 1/2");
  if (j == 1 && !(sigma > 0.25 && sigma <= 0.5))
    throw ContractError("the w-side smoothing estimate assumes 1/4 < sigma <= 1/2");
  if (j != 0 && j != 1) throw ContractError("j must be 0 or 1");
  if (!(t >= 0 && t <= 1)) throw ContractError("smoothing diagnostics assume 0 <= t <= 1");
  if (!(sigma < spec.s - 0.5)) throw ContractError("support regularity requires sigma < s - 1/2");
  if (!(params.epsilon > 0)) throw ContractError("epsilon must be positive");
  if (N_list.empty()) throw ContractError("empty N list");
  params.require_nonresonant();

  SmoothingReport rep;
  rep.j = j;
  rep.t = t;
  rep.s = spec.s;
  rep.sigma = sigma;
  rep.epsilon = params.epsilon;
  rep.exponent_a = j == 1 ? sigma + 1.0 + params.epsilon : sigma + 2.0;
  rep.exponent_b = j == 1 ? sigma + 1.0 + params.epsilon : 3.0 * sigma;
  const double exponent_K = j == 1 ? rep.exponent_a : std::min(rep.exponent_a, rep.exponent_b);
  rep.N_list = N_list;
  const EquationKind kind = j == 0 ? EquationKind::v_form : EquationKind::w_form;

  for (int N : N_list) {
    MeasureSpec local = spec;
    local.N = N;
    local.validate();
    const double dt = rule.dt(N);
    rep.dt_used.push_back(dt);
    const Eigen::VectorXd w_sigma = weights(N, sigma), w_a = weights(N, rep.exponent_a),
                          w_b = weights(N, rep.exponent_b), w_K = weights(N, exponent_K);
    std::vector<SmoothingRow> rows(static_cast<std::size_t>(spec.count));
    parallel_for(rows.size(), [&](std::size_t i) {
      SpectralState u0 = sample_mu(local, static_cast<long>(i));
      u0.rep = j == 0 ? Rep::v : Rep::w;
      double sup = 0.0;
      CVec split;
      const SpectralState end = evolve_split(
          kind, u0, t, dt, params,
          [&](long, const SpectralState& s) { sup = std::max(sup, weighted_norm(s.coeffs, w_sigma)); },
          split);
      const CVec K = end.coeffs - u0.coeffs;
      const CVec main = K - split;  // N_0 (j=0) or N_1 (j=1)
      SmoothingRow& row = rows[i];
      row.N = N;
      row.sample = static_cast<long>(i);
      row.sup_norm = sup;
      row.norm_K = weighted_norm(K, w_K);
      row.norm_a = weighted_norm(main, w_a);
      row.norm_b = weighted_norm(split, w_b);
      if (j == 1) {
        for (int k = 0; k <= 2; ++k) row.bound_a += std::pow(t, k) * std::pow(sup, 2 * k + 3);
        for (int k = 1; k <= 3; ++k) row.bound_b += std::pow(t, k) * std::pow(sup, 2 * k + 3);
      } else {
        const double n0 = weighted_norm(u0.coeffs, w_sigma), nt = weighted_norm(end.coeffs, w_sigma);
        row.bound_a = n0 * n0 * n0 + nt * nt * nt + t * std::pow(sup, 5);
        row.bound_b = t * std::pow(sup, 3);
      }
      row.ratio_a = row.bound_a > 0 ? row.norm_a / row.bound_a : 0.0;
      row.ratio_b = row.bound_b > 0 ? row.norm_b / row.bound_b : 0.0;
    });
    rep.rows.insert(rep.rows.end(), rows.begin(), rows.end());
  }
  rep.q_K = summarize(rep.rows, N_list, &SmoothingRow::norm_K);
  rep.q_a = summarize(rep.rows, N_list, &SmoothingRow::norm_a);
  rep.q_b = summarize(rep.rows, N_list, &SmoothingRow::norm_b);
  rep.q_ratio_a = summarize(rep.rows, N_list, &SmoothingRow::ratio_a);
  rep.q_ratio_b = summarize(rep.rows, N_list, &SmoothingRow::ratio_b);
  return rep;
}

RamerReport ramer_diagnostic(const SpectralState& u0, double t, int j, const ModelParams& params,
                             double fd_step, double dt) {
  if (!(fd_step > 0)) throw ContractError("fd_step must be positive");
  if (j != 0 && j != 1) throw ContractError("j must be 0 or 1");
  for (Eigen::Index i = 0; i < u0.coeffs.size(); ++i)
    if (!std::isfinite(u0.coeffs[i].real()) || !std::isfinite(u0.coeffs[i].imag()))
      throw ValidationError("initial state must be finite");
  const int N = u0.N();
  const int D = 2 * N + 1;
  const int R = 2 * D;  // real coordinates (Re, Im) per mode
  RamerReport rep;
  rep.N = N;
  rep.t = t;

  auto K = [&](const CVec& c) {
    SpectralState s = with_coeffs(u0, c);
    return remainder_K(s, t, j, params, dt).coeffs;
  };
  auto realify = [&](const CVec& c) {
    Eigen::VectorXd x(R);
    for (int i = 0; i < D; ++i) {
      x[2 * i] = c[i].real();
      x[2 * i + 1] = c[i].imag();
    }
    return x;
  };
  const Eigen::VectorXd base = realify(K(u0.coeffs));
  Eigen::MatrixXd Jh(R, R), Jh2(R, R), fwd(R, R), bwd(R, R);
  parallel_for(static_cast<std::size_t>(R), [&](std::size_t k) {
    const int mode = static_cast<int>(k) / 2 - N;
    const cplx dir = (k % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    const double h = fd_step * std::pow(japanese(mode), -params.s);
    auto probe = [&](double step) {
      CVec c = u0.coeffs;
      c[mode + N] += step * dir;
      return realify(K(c));
    };
    const Eigen::VectorXd p1 = probe(h), m1 = probe(-h), p2 = probe(0.5 * h), m2 = probe(-0.5 * h);
    Jh.col(static_cast<Eigen::Index>(k)) = (p1 - m1) / (2.0 * h);
    Jh2.col(static_cast<Eigen::Index>(k)) = (p2 - m2) / h;
    fwd.col(static_cast<Eigen::Index>(k)) = (p1 - base) / h;
    bwd.col(static_cast<Eigen::Index>(k)) = (base - m1) / h;
  });
  rep.probe_count = 4L * R + 1;

  // A = W DK W^{-1}, W = diag(<n>^s) on both real coordinates of mode n.
  Eigen::VectorXd w(R);
  for (int i = 0; i < D; ++i) w[2 * i] = w[2 * i + 1] = std::pow(japanese(i - N), params.s);
  auto weigh = [&](const Eigen::MatrixXd& J) {
    return Eigen::MatrixXd(w.asDiagonal() * J * w.cwiseInverse().asDiagonal());
  };
  const Eigen::MatrixXd Ah = weigh(Jh), Ah2 = weigh(Jh2);
  const double ref = Ah2.norm();
  rep.richardson_rel = ref > 0 ? (Ah - Ah2).norm() / ref : (Ah.norm() > 0 ? 1.0 : 0.0);
  if (rep.richardson_rel > 0.1)
    throw StepSizeError("finite-difference Jacobian changes by " + std::to_string(rep.richardson_rel) +
                        " between fd_step and fd_step/2; reduce fd_step");
  const double central = Jh.norm();
  rep.one_sided_rel = central > 0 ? (fwd - bwd).norm() / central : 0.0;
  const Eigen::MatrixXd A = weigh((4.0 * Jh2 - Jh) / 3.0);
  rep.hs_norm = A.norm();
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(R, R) + A;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  rep.min_singular_value = sv.minCoeff();
  rep.max_singular_value = sv.maxCoeff();
  rep.abs_determinant = sv.prod();
  return rep;
}

}  // namespace tnls
