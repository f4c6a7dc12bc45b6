#include "tnls/gauges.hpp"

#include "tnls/spectral.hpp"

namespace tnls {

namespace {

cplx unimodular(double angle) { return {std::cos(angle), std::sin(angle)}; }

void require_rep(const SpectralState& s, Rep expected, const char* op) {
  if (s.rep != expected)
    throw ContractError(std::string(op) + " expects representation '" + rep_name(expected) +
                        "', got '" + rep_name(s.rep) + "'");
}

}  // namespace

CVec propagator_phases(int N, double t, double beta) {
  CVec e(2 * N + 1);
  for (int n = -N; n <= N; ++n) e[n + N] = unimodular(-t * dispersion(n, beta));
  return e;
}

SpectralState linear_propagator(const SpectralState& state, double t, const ModelParams& params) {
  SpectralState out = state;
  out.coeffs = state.coeffs.cwiseProduct(propagator_phases(state.N(), t, params.beta.value()));
  out.time = state.time + t;
  return out;
}

CVec apply_G(const CVec& c, double t) { return unimodular(2.0 * t * mass(c)) * c; }

CVec apply_J(const CVec& c, double t) {
  CVec out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) out[i] = unimodular(-t * std::norm(c[i])) * c[i];
  return out;
}

SpectralState gauge_G(const SpectralState& state, double t, GaugeDirection dir) {
  const bool fwd = dir == GaugeDirection::forward;
  require_rep(state, fwd ? Rep::u : Rep::u_gauged, "gauge_G");
  SpectralState out = state;
  out.coeffs = apply_G(state.coeffs, fwd ? t : -t);
  out.rep = fwd ? Rep::u_gauged : Rep::u;
  return out;
}

SpectralState gauge_J(const SpectralState& state, double t, GaugeDirection dir) {
  const bool fwd = dir == GaugeDirection::forward;
  require_rep(state, fwd ? Rep::u_gauged : Rep::u_j, "gauge_J");
  SpectralState out = state;
  out.coeffs = apply_J(state.coeffs, fwd ? t : -t);
  out.rep = fwd ? Rep::u_j : Rep::u_gauged;
  return out;
}

SpectralState interaction_map(const SpectralState& state, GaugeDirection dir,
                              const ModelParams& params) {
  Rep to;
  if (dir == GaugeDirection::forward) {
    if (state.rep == Rep::u_gauged) to = Rep::v;
    else if (state.rep == Rep::u_j) to = Rep::w;
    else throw ContractError("interaction_map forward expects 'u_gauged' or 'u_j'");
  } else {
    if (state.rep == Rep::v) to = Rep::u_gauged;
    else if (state.rep == Rep::w) to = Rep::u_j;
    else throw ContractError("interaction_map inverse expects 'v' or 'w'");
  }
  const double t = dir == GaugeDirection::forward ? -state.time : state.time;
  SpectralState out = state;
  out.coeffs = state.coeffs.cwiseProduct(propagator_phases(state.N(), t, params.beta.value()));
  out.rep = to;
  return out;
}

}  // namespace tnls
