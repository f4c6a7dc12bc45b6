#include "tnls/normal_form.hpp"

#include "tnls/parallel.hpp"
#include "tnls/quadrature.hpp"
#include "tnls/resonance.hpp"
#include "tnls/spectral.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace tnls {

namespace {

const cplx I(0.0, 1.0);

cplx unimodular(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Tuple {
  int n, n1, n2, n3;
  double phi;
};

std::vector<Tuple> gamma_tuples(int N, const Beta& beta) {
  std::vector<Tuple> out;
  for_each_gamma(N, beta, [&](int n, int n1, int n2, int n3, double ph) {
    out.push_back({n + N, n1 + N, n2 + N, n3 + N, ph});
  });
  return out;
}

// Leading snapshots covering [0, t]; checks start time and uniform spacing.
std::size_t select_nodes(const Trajectory& traj, double t, EquationKind expected) {
  if (traj.kind != expected)
    throw ContractError(std::string("decomposition expects a '") + kind_name(expected) + "' trajectory");
  if (traj.times.empty() || traj.times.size() != traj.states.size())
    throw ContractError("trajectory is empty or inconsistent");
  if (std::abs(traj.times.front()) > 1e-14) throw ContractError("decomposition requires start time 0");
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  std::size_t last = traj.times.size();
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    if (std::abs(traj.times[k] - t) <= tol) last = k;
  if (last == traj.times.size()) throw ContractError("t is not a snapshot time of the trajectory");
  if (last == 0) return 1;
  const std::size_t nodes = last + 1;
  if (nodes < 9)
    throw QuadratureError("need at least 9 snapshots on [0, t], got " + std::to_string(nodes));
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t k = 1; k < nodes; ++k)
    if (std::abs(traj.times[k] - traj.times[k - 1] - h) > 1e-9 * h)
      throw QuadratureError("snapshot spacing is not uniform");
  return nodes;
}

SpectralState tagged(const SpectralState& like, CVec c, double t) {
  SpectralState s = with_coeffs(like, std::move(c));
  s.time = t;
  return s;
}

double h0_distance(const CVec& a, const CVec& b) { return (a - b).norm(); }

}  // namespace

SpectralState NormalFormTermsW::sum_N1() const {
  SpectralState s = terms_N1.at("I(t)");
  for (const auto& [name, term] : terms_N1) {
    if (name == "I(t)") continue;
    if (name == "I(0)") s.coeffs -= term.coeffs;
    else s.coeffs += term.coeffs;
  }
  return s;
}

SpectralState NormalFormTermsW::sum_N2() const {
  SpectralState s = terms_N2.at("I~");
  for (const auto& [name, term] : terms_N2)
    if (name != "I~") s.coeffs += term.coeffs;
  return s;
}

double xi(const SpectralState& state, int n, double t, const Beta& beta) {
  if (state.rep != Rep::w) throw ContractError("xi expects a w-representation state");
  (void)state.at(n);
  const int N = state.N();
  cplx acc = 0.0;
  for (int n1 = -N; n1 <= N; ++n1) {
    if (n1 == n) continue;
    for (int n3 = -N; n3 <= N; ++n3) {
      const int n2 = n1 + n3 - n;
      if (n3 == n || n2 < -N || n2 > N || beta.on_shell(n1 + n3)) continue;
      const double ph = 3.0 * double(n - n1) * double(n - n3) * (double(n1 + n3) - beta.shell());
      const double ps = -std::norm(state[n]) + std::norm(state[n1]) - std::norm(state[n2]) +
                        std::norm(state[n3]);
      acc += unimodular(t * (ph + ps)) * state[n1] * std::conj(state[n2]) * state[n3];
    }
  }
  return 2.0 * std::imag(acc * std::conj(state[n]));
}

NormalFormTermsV nf_decompose_v(const Trajectory& traj, double t, const ModelParams& params) {
  params.require_nonresonant();
  const std::size_t nodes = select_nodes(traj, t, EquationKind::v_form);
  const SpectralState& first = traj.states.front();
  const int N = first.N();
  const int D = 2 * N + 1;
  const SpectralState zero = tagged(first, CVec::Zero(D), t);
  NormalFormTermsV out{zero, zero, zero, zero, zero, zero, 0.0};
  if (nodes == 1) return out;

  const std::vector<Tuple> tuples = gamma_tuples(N, params.beta);
  const std::vector<double> wts = simpson_weights(nodes, traj.times[1] - traj.times[0]);
  enum { kN0, kR0, kII, kIII, kBoundary, kCount };
  std::vector<std::array<CVec, kCount>> per(nodes);

  parallel_for(nodes, [&](std::size_t k) {
    const double tau = traj.times[k];
    const CVec& v = traj.states[k].coeffs;
    std::array<CVec, kCount>& r = per[k];
    for (auto& x : r) x = CVec::Zero(D);
    CVec expo(tuples.size());
    for (std::size_t q = 0; q < tuples.size(); ++q) {
      const Tuple& g = tuples[q];
      expo[q] = unimodular(tau * g.phi);
      r[kN0][g.n] += -I * expo[q] * v[g.n1] * std::conj(v[g.n2]) * v[g.n3];
    }
    for (int i = 0; i < D; ++i) r[kR0][i] = I * std::norm(v[i]) * v[i];
    const CVec dv = r[kN0] + r[kR0];
    for (std::size_t q = 0; q < tuples.size(); ++q) {
      const Tuple& g = tuples[q];
      const cplx e = expo[q] / g.phi;
      r[kII][g.n] += 2.0 * e * dv[g.n1] * std::conj(v[g.n2]) * v[g.n3];
      r[kIII][g.n] += e * v[g.n1] * std::conj(dv[g.n2]) * v[g.n3];
      r[kBoundary][g.n] -= e * v[g.n1] * std::conj(v[g.n2]) * v[g.n3];
    }
  });

  CVec n0 = CVec::Zero(D), r0 = CVec::Zero(D), ii = CVec::Zero(D), iii = CVec::Zero(D);
  for (std::size_t k = 0; k < nodes; ++k) {
    n0 += wts[k] * per[k][kN0];
    r0 += wts[k] * per[k][kR0];
    ii += wts[k] * per[k][kII];
    iii += wts[k] * per[k][kIII];
  }
  const CVec& bt = per[nodes - 1][kBoundary];
  const CVec& b0 = per[0][kBoundary];
  out.residual = h0_distance(n0, bt - b0 + ii + iii);
  out.boundary_t = tagged(first, bt, t);
  out.boundary_0 = tagged(first, b0, t);
  out.quintic_II = tagged(first, ii, t);
  out.quintic_III = tagged(first, iii, t);
  out.resonant_integral = tagged(first, r0, t);
  out.nonresonant_integral = tagged(first, n0, t);
  return out;
}

NormalFormTermsW nf_decompose_w(const Trajectory& traj, double t, const ModelParams& params) {
  params.require_nonresonant();
  if (!traj.states.empty() && traj.states.front().N() > kMaxNormalFormN)
    throw CapacityError("w-side decomposition is capped at N = " + std::to_string(kMaxNormalFormN) +
                        "; use the v-side decomposition for larger truncations");
  const std::size_t nodes = select_nodes(traj, t, EquationKind::w_form);
  const SpectralState& first = traj.states.front();
  const int N = first.N();
  const int D = 2 * N + 1;
  const SpectralState zero = tagged(first, CVec::Zero(D), t);
  NormalFormTermsW out;
  const char* n1_names[] = {"I(t)", "I(0)", "II", "III_1", "III_2", "IV_1", "IV_2"};
  const char* n2_names[] = {"I~", "II~", "III~", "IV~_0", "IV~_1", "IV~_2", "IV~_3"};
  for (const char* s : n1_names) out.terms_N1.emplace(s, zero);
  for (const char* s : n2_names) out.terms_N2.emplace(s, zero);
  out.integral_N1 = out.integral_N2 = zero;
  if (nodes == 1) return out;

  const std::vector<Tuple> tuples = gamma_tuples(N, params.beta);
  const std::vector<double> wts = simpson_weights(nodes, traj.times[1] - traj.times[0]);
  enum { kN1, kN2, kII, kIII1, kIII2, kIV1, kIV2, kII2, kIII3, kIV0b, kIV1b, kIV2b, kIV3b, kBnd, kBnd2, kCount };
  std::vector<std::array<CVec, kCount>> per(nodes);

  parallel_for(nodes, [&](std::size_t k) {
    const double tau = traj.times[k];
    const CVec& w = traj.states[k].coeffs;
    std::array<CVec, kCount>& r = per[k];
    for (auto& x : r) x = CVec::Zero(D);
    const Eigen::VectorXd a = w.cwiseAbs2();
    CVec expo(tuples.size());
    CVec S = CVec::Zero(D);
    for (std::size_t q = 0; q < tuples.size(); ++q) {
      const Tuple& g = tuples[q];
      const double ps = -a[g.n] + a[g.n1] - a[g.n2] + a[g.n3];
      expo[q] = unimodular(tau * (g.phi + ps));
      S[g.n] += expo[q] * w[g.n1] * std::conj(w[g.n2]) * w[g.n3];
    }
    Eigen::VectorXd Xi(D);
    CVec dw(D);
    for (int i = 0; i < D; ++i) {
      Xi[i] = 2.0 * std::imag(S[i] * std::conj(w[i]));
      dw[i] = -I * S[i] - I * tau * Xi[i] * w[i];
      r[kN1][i] = -I * S[i];
      r[kN2][i] = -I * tau * Xi[i] * w[i];
    }
    CVec Q = CVec::Zero(D), P = CVec::Zero(D), R1 = CVec::Zero(D), R2 = CVec::Zero(D),
         R3 = CVec::Zero(D);
    for (std::size_t q = 0; q < tuples.size(); ++q) {
      const Tuple& g = tuples[q];
      const double ps = -a[g.n] + a[g.n1] - a[g.n2] + a[g.n3];
      const double psdot = -Xi[g.n] + Xi[g.n1] - Xi[g.n2] + Xi[g.n3];
      const cplx e = expo[q] / g.phi;
      const cplx W = w[g.n1] * std::conj(w[g.n2]) * w[g.n3];
      const double corr = ps + tau * psdot;
      r[kII][g.n] += I * e * corr * W;
      r[kIII1][g.n] += -2.0 * I * e * S[g.n1] * std::conj(w[g.n2]) * w[g.n3];
      r[kIII2][g.n] += I * e * w[g.n1] * std::conj(S[g.n2]) * w[g.n3];
      r[kIV1][g.n] += -2.0 * I * tau * e * Xi[g.n1] * W;
      r[kIV2][g.n] += I * tau * e * Xi[g.n2] * W;
      r[kBnd][g.n] -= e * W;
      const cplx wn = std::conj(w[g.n]);
      Q[g.n] += e * W * wn;
      P[g.n] += e * corr * W * wn;
      R1[g.n] += e * dw[g.n1] * std::conj(w[g.n2]) * w[g.n3] * wn;
      R2[g.n] += e * w[g.n1] * std::conj(dw[g.n2]) * w[g.n3] * wn;
      R3[g.n] += e * W * std::conj(dw[g.n]);
    }
    for (int i = 0; i < D; ++i) {
      r[kII2][i] = -2.0 * I * w[i] * Q[i].real();
      r[kIII3][i] = 2.0 * I * tau * w[i] * P[i].imag();
      r[kIV0b][i] = -2.0 * I * tau * dw[i] * Q[i].real();
      r[kIV1b][i] = -4.0 * I * tau * w[i] * R1[i].real();
      r[kIV2b][i] = -2.0 * I * tau * w[i] * R2[i].real();
      r[kIV3b][i] = -2.0 * I * tau * w[i] * R3[i].real();
      r[kBnd2][i] = 2.0 * I * tau * w[i] * Q[i].real();
    }
  });

  std::array<CVec, kCount> q;
  for (auto& x : q) x = CVec::Zero(D);
  for (std::size_t k = 0; k < nodes; ++k)
    for (int j = 0; j < kCount; ++j) q[j] += wts[k] * per[k][j];

  auto put = [&](std::map<std::string, SpectralState>& m, const char* name, const CVec& c) {
    m[name] = tagged(first, c, t);
  };
  put(out.terms_N1, "I(t)", per[nodes - 1][kBnd]);
  put(out.terms_N1, "I(0)", per[0][kBnd]);
  put(out.terms_N1, "II", q[kII]);
  put(out.terms_N1, "III_1", q[kIII1]);
  put(out.terms_N1, "III_2", q[kIII2]);
  put(out.terms_N1, "IV_1", q[kIV1]);
  put(out.terms_N1, "IV_2", q[kIV2]);
  put(out.terms_N2, "I~", per[nodes - 1][kBnd2]);
  put(out.terms_N2, "II~", q[kII2]);
  put(out.terms_N2, "III~", q[kIII3]);
  put(out.terms_N2, "IV~_0", q[kIV0b]);
  put(out.terms_N2, "IV~_1", q[kIV1b]);
  put(out.terms_N2, "IV~_2", q[kIV2b]);
  put(out.terms_N2, "IV~_3", q[kIV3b]);
  out.integral_N1 = tagged(first, q[kN1], t);
  out.integral_N2 = tagged(first, q[kN2], t);
  out.residual_N1 = h0_distance(q[kN1], out.sum_N1().coeffs);
  out.residual_N2 = h0_distance(q[kN2], out.sum_N2().coeffs);
  return out;
}

SpectralState remainder_K(const SpectralState& u0, double t, int j, const ModelParams& params,
                          double dt) {
  if (j != 0 && j != 1) throw ContractError("remainder index j must be 0 or 1");
  SpectralState start = u0;
  start.rep = j == 0 ? Rep::v : Rep::w;
  start.time = 0.0;
  const EquationKind kind = j == 0 ? EquationKind::v_form : EquationKind::w_form;
  SpectralState end = evolve_observed(kind, start, t, dt, params, nullptr);
  end.coeffs -= start.coeffs;
  return end;
}

}  // namespace tnls
