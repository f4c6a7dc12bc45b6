#include "tnls/dynamics.hpp"

#include "tnls/gauges.hpp"
#include "tnls/resonance.hpp"
#include "tnls/spectral.hpp"

#include <cmath>

namespace tnls {

namespace {

const cplx I(0.0, 1.0);

cplx unimodular(double angle) { return {std::cos(angle), std::sin(angle)}; }

int order_of(const CVec& c) { return static_cast<int>(c.size() - 1) / 2; }

void check_kind(EquationKind kind, const SpectralState& s, const ModelParams& params) {
  if (s.rep != rep_for(kind))
    throw ContractError(std::string("equation '") + kind_name(kind) + "' expects representation '" +
                        rep_name(rep_for(kind)) + "', got '" + rep_name(s.rep) + "'");
  if (kind == EquationKind::v_form || kind == EquationKind::w_form) params.require_nonresonant();
}

// Nonlinear part for the physical kinds: -i P(|u|^2 u) or its renormalized version.
void physical_nonlinear(const CVec& c, bool renormalized, CVec& out) {
  cubic_fft(c, order_of(c), renormalized, out);
  out *= -I;
}

// Interaction-picture derivatives given the propagator phases e = exp(-i t p(n)).
void v_form_kernel(const CVec& v, const CVec& e, CVec& u, CVec& out) {
  u = v.cwiseProduct(e);
  cubic_fft(u, order_of(v), true, out);
  out = (-I) * out.cwiseProduct(e.conjugate());
}

void w_form_kernel(const CVec& w, double t, const CVec& e, CVec& rot, CVec& ug, CVec& c,
                   CVec& dwdt, Eigen::VectorXd& xi) {
  const Eigen::Index D = w.size();
  rot.resize(D);
  ug.resize(D);  // u_gauged = J_t^{-1} S(t) w
  for (Eigen::Index i = 0; i < D; ++i) {
    rot[i] = unimodular(t * std::norm(w[i]));
    ug[i] = rot[i] * w[i] * e[i];
  }
  cubic_fft(ug, order_of(w), true, c);
  xi.resize(D);
  dwdt.resize(D);
  for (Eigen::Index i = 0; i < D; ++i) {
    // exp(-i t a) N1 = exp(-i t a) c + a u_j with a = |w_n|^2 and u_j = S(t) w.
    const double a = std::norm(w[i]);
    const cplx uj = w[i] * e[i];
    xi[i] = 2.0 * std::imag(c[i] * std::conj(ug[i]));
    dwdt[i] = std::conj(e[i]) * (-I * (std::conj(rot[i]) * c[i] + a * uj) - I * t * xi[i] * uj);
  }
}

class Integrator {
 public:
  Integrator(EquationKind k, double beta, bool track_aux = false)
      : kind_(k), beta_(beta), track_aux_(track_aux) {}

  bool interaction() const { return kind_ == EquationKind::v_form || kind_ == EquationKind::w_form; }

  // Nonlinear part at time t (for the interaction kinds the phases are computed here).
  void nonlinear(const CVec& c, double t, CVec& out) {
    if (interaction()) e0_ = propagator_phases(order_of(c), t, beta_);
    nonlinear(c, t, e0_, out, nullptr);
  }

  // Auxiliary integral accumulated with the same stage values (see evolve_split).
  const CVec& aux_integral() const { return aux_; }

  CVec advance(const CVec& u, double t, double h) {
    const int N = order_of(u);
    set_step(N, h);
    if (track_aux_ && aux_.size() != u.size()) aux_ = CVec::Zero(u.size());
    if (interaction()) {
      stage_phases(N, t, h);
      nonlinear(u, t, e0_, k1_, &g1_);
      tmp_ = u + (0.5 * h) * k1_;
      nonlinear(tmp_, t + 0.5 * h, e_half_, k2_, &g2_);
      tmp_ = u + (0.5 * h) * k2_;
      nonlinear(tmp_, t + 0.5 * h, e_half_, k3_, &g3_);
      tmp_ = u + h * k3_;
      nonlinear(tmp_, t + h, e_full_, k4_, &g4_);
      if (track_aux_) aux_ += (h / 6.0) * (g1_ + 2.0 * g2_ + 2.0 * g3_ + g4_);
      return u + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }
    // Lawson form: the dispersive factor E(h) = exp(-i p h) is applied exactly.
    nonlinear(u, t, e0_, k1_, nullptr);
    tmp_ = eh2_.cwiseProduct(u + (0.5 * h) * k1_);
    nonlinear(tmp_, t, e0_, k2_, nullptr);
    tmp_ = eh2_.cwiseProduct(u) + (0.5 * h) * k2_;
    nonlinear(tmp_, t, e0_, k3_, nullptr);
    tmp_ = eh_.cwiseProduct(u) + h * eh2_.cwiseProduct(k3_);
    nonlinear(tmp_, t, e0_, k4_, nullptr);
    return eh_.cwiseProduct(u) +
           (h / 6.0) * (eh_.cwiseProduct(k1_) + 2.0 * eh2_.cwiseProduct(k2_ + k3_) + k4_);
  }

 private:
  static constexpr int kPhaseRefresh = 64;

  void nonlinear(const CVec& c, double t, const CVec& e, CVec& out, CVec* aux) {
    switch (kind_) {
      case EquationKind::original: physical_nonlinear(c, false, out); break;
      case EquationKind::renormalized: physical_nonlinear(c, true, out); break;
      case EquationKind::v_form:
        v_form_kernel(c, e, s1_, out);
        if (track_aux_ && aux) *aux = I * c.cwiseAbs2().cast<cplx>().cwiseProduct(c);
        break;
      case EquationKind::w_form:
        w_form_kernel(c, t, e, s1_, s2_, s3_, out, xi_);
        if (track_aux_ && aux) *aux = (-I * t) * xi_.cast<cplx>().cwiseProduct(c);
        break;
    }
  }

  void set_step(int N, double h) {
    if (h == cached_h_ && eh_.size() == 2 * N + 1) return;
    eh_ = propagator_phases(N, h, beta_);
    eh2_ = propagator_phases(N, 0.5 * h, beta_);
    cached_h_ = h;
    phase_steps_ = kPhaseRefresh;
  }

  // Phases at t, t + h/2, t + h. Consecutive steps reuse the previous end phases,
  // with an exact evaluation every kPhaseRefresh steps.
  void stage_phases(int N, double t, double h) {
    if (phase_steps_ < kPhaseRefresh && std::abs(t - next_t_) <= 1e-12 * std::max(1.0, std::abs(t))) {
      e0_.swap(e_full_);
      ++phase_steps_;
    } else {
      e0_ = propagator_phases(N, t, beta_);
      phase_steps_ = 0;
    }
    e_half_ = e0_.cwiseProduct(eh2_);
    e_full_ = e0_.cwiseProduct(eh_);
    next_t_ = t + h;
  }

  EquationKind kind_;
  double beta_;
  bool track_aux_;
  CVec k1_, k2_, k3_, k4_, tmp_, e0_, e_half_, e_full_, s1_, s2_, s3_;
  CVec g1_, g2_, g3_, g4_, aux_;
  Eigen::VectorXd xi_;
  CVec eh_, eh2_;
  double cached_h_ = -1.0, next_t_ = 0.0;
  int phase_steps_ = kPhaseRefresh;
};

void check_finite(const CVec& c, double t) {
  const int N = order_of(c);
  for (int n = -N; n <= N; ++n) {
    const cplx z = c[n + N];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw StepFailure("non-finite coefficient at mode " + std::to_string(n) + " after step to t=" +
                        std::to_string(t) + "; reduce dt");
  }
}

}  // namespace

const char* kind_name(EquationKind k) {
  switch (k) {
    case EquationKind::original: return "original";
    case EquationKind::renormalized: return "renormalized";
    case EquationKind::v_form: return "v_form";
    case EquationKind::w_form: return "w_form";
  }
  return "?";
}

EquationKind kind_from_name(const std::string& s) {
  for (EquationKind k : {EquationKind::original, EquationKind::renormalized, EquationKind::v_form,
                         EquationKind::w_form})
    if (s == kind_name(k)) return k;
  throw ValidationError("unknown equation kind '" + s + "'");
}

Rep rep_for(EquationKind k) {
  switch (k) {
    case EquationKind::original: return Rep::u;
    case EquationKind::renormalized: return Rep::u_gauged;
    case EquationKind::v_form: return Rep::v;
    case EquationKind::w_form: return Rep::w;
  }
  return Rep::u;
}

void w_form_terms(const CVec& w, double t, double beta, CVec& dwdt, Eigen::VectorXd& xi) {
  CVec rot, ug, c;
  w_form_kernel(w, t, propagator_phases(order_of(w), t, beta), rot, ug, c, dwdt, xi);
}

SpectralState rhs(EquationKind kind, const SpectralState& state, double t, const ModelParams& params) {
  check_kind(kind, state, params);
  Integrator it(kind, params.beta.value());
  CVec out;
  it.nonlinear(state.coeffs, t, out);
  if (kind == EquationKind::original || kind == EquationKind::renormalized) {
    const int N = state.N();
    for (int n = -N; n <= N; ++n) out[n + N] -= I * dispersion(n, params.beta.value()) * state[n];
  }
  return with_coeffs(state, std::move(out));
}

SpectralState rhs_direct(EquationKind kind, const SpectralState& state, double t,
                         const ModelParams& params) {
  check_kind(kind, state, params);
  const int N = state.N();
  const double beta = params.beta.value();
  CVec out = CVec::Zero(2 * N + 1);
  if (kind == EquationKind::original || kind == EquationKind::renormalized) {
    const SpectralState all = cubic_terms_direct(state, TripleFilter::all, params.beta);
    const double m2 = kind == EquationKind::renormalized ? 2.0 * mass(state.coeffs) : 0.0;
    for (int n = -N; n <= N; ++n)
      out[n + N] = -I * dispersion(n, beta) * state[n] - I * (all[n] - m2 * state[n]);
    return with_coeffs(state, std::move(out));
  }
  const bool w = kind == EquationKind::w_form;
  CVec sum = CVec::Zero(2 * N + 1);
  for_each_gamma(N, params.beta, [&](int n, int n1, int n2, int n3, double ph) {
    double theta = ph;
    if (w) theta += -std::norm(state[n]) + std::norm(state[n1]) - std::norm(state[n2]) + std::norm(state[n3]);
    sum[n + N] += unimodular(t * theta) * state[n1] * std::conj(state[n2]) * state[n3];
  });
  for (int n = -N; n <= N; ++n) {
    if (w) {
      const double xi_n = 2.0 * std::imag(sum[n + N] * std::conj(state[n]));
      out[n + N] = -I * sum[n + N] - I * t * xi_n * state[n];
    } else {
      out[n + N] = -I * sum[n + N] + I * std::norm(state[n]) * state[n];
    }
  }
  return with_coeffs(state, std::move(out));
}

SpectralState step(EquationKind kind, const SpectralState& state, double t, double dt,
                   const ModelParams& params) {
  check_kind(kind, state, params);
  if (!(dt > 0)) throw ContractError("step requires dt > 0");
  Integrator it(kind, params.beta.value());
  CVec next = it.advance(state.coeffs, t, dt);
  check_finite(next, t + dt);
  SpectralState out = with_coeffs(state, std::move(next));
  out.time = t + dt;
  return out;
}

long step_count(double t_final, double dt) {
  if (!(dt > 0)) throw ContractError("dt must be positive");
  if (t_final == 0.0) return 0;
  const double ratio = t_final / dt;
  const double r = std::round(ratio);
  if (std::abs(ratio - r) <= 1e-9 * std::max(1.0, ratio)) return std::max(1L, static_cast<long>(r));
  return static_cast<long>(std::ceil(ratio));
}

namespace {

SpectralState run(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                  const ModelParams& params, const StepObserver& observer, CVec* integral) {
  check_kind(kind, u0, params);
  if (t_final < 0) throw ContractError("evolve requires t_final >= 0");
  const long steps = step_count(t_final, dt);
  const double h = steps > 0 ? t_final / steps : 0.0;
  const double t0 = u0.time;
  Integrator it(kind, params.beta.value(), integral != nullptr);
  SpectralState cur = u0;
  if (observer) observer(0, cur);
  for (long k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    cur.coeffs = it.advance(cur.coeffs, t, h);
    cur.time = (k + 1 == steps) ? t0 + t_final : t0 + (k + 1) * h;
    check_finite(cur.coeffs, cur.time);
    if (observer) observer(k + 1, cur);
  }
  if (integral) *integral = steps > 0 ? it.aux_integral() : CVec::Zero(u0.coeffs.size());
  return cur;
}

}  // namespace

SpectralState evolve_observed(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                              const ModelParams& params, const StepObserver& observer) {
  return run(kind, u0, t_final, dt, params, observer, nullptr);
}

SpectralState evolve_split(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                           const ModelParams& params, const StepObserver& observer,
                           CVec& integral) {
  if (kind != EquationKind::v_form && kind != EquationKind::w_form)
    throw ContractError("evolve_split applies to the interaction kinds only");
  return run(kind, u0, t_final, dt, params, observer, &integral);
}

Trajectory evolve(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                  const ModelParams& params, int snapshot_stride) {
  if (snapshot_stride < 1) throw ContractError("snapshot_stride must be >= 1");
  Trajectory traj{params, kind, {}, {}};
  const long steps = step_count(t_final, dt);
  evolve_observed(kind, u0, t_final, dt, params, [&](long k, const SpectralState& s) {
    if (k % snapshot_stride == 0 || k == steps) {
      traj.times.push_back(s.time);
      traj.states.push_back(s);
    }
  });
  return traj;
}

Conserved conserved_quantities(const SpectralState& state, const ModelParams& params) {
  if (state.rep != Rep::u) throw ContractError("conserved_quantities expects physical variables");
  const int N = state.N();
  const double beta = params.beta.value();
  double quad = 0.0;
  for (int n = -N; n <= N; ++n) {
    const double x = n;
    quad += (-0.5 * x * x * x + 0.5 * beta * x * x) * std::norm(state[n]);
  }
  return {mass(state.coeffs), quad - 0.25 * quartic_mean(state.coeffs, N)};
}

SpectralState to_physical(const SpectralState& state, const ModelParams& params) {
  const double t = state.time;
  switch (state.rep) {
    case Rep::u: return state;
    case Rep::u_gauged: return gauge_G(state, t, GaugeDirection::inverse);
    case Rep::u_j: return to_physical(gauge_J(state, t, GaugeDirection::inverse), params);
    case Rep::v:
    case Rep::w: return to_physical(interaction_map(state, GaugeDirection::inverse, params), params);
  }
  return state;
}

}  // namespace tnls
