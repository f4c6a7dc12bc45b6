#pragma once

#include "tnls/dynamics.hpp"
#include "tnls/types.hpp"

#include <map>
#include <string>

namespace tnls {

constexpr int kMaxNormalFormN = 16;

struct NormalFormTermsV {
  SpectralState boundary_t;
  SpectralState boundary_0;
  SpectralState quintic_II;
  SpectralState quintic_III;
  SpectralState resonant_integral;     // quadrature of i|v_n|^2 v_n
  SpectralState nonresonant_integral;  // quadrature of the Gamma-sum nonlinearity
  double residual = 0.0;
};

struct NormalFormTermsW {
  // Keys "I(t)", "I(0)", "II", "III_1", "III_2", "IV_1", "IV_2"; the sum subtracts "I(0)".
  std::map<std::string, SpectralState> terms_N1;
  // Keys "I~", "II~", "III~", "IV~_0", "IV~_1", "IV~_2", "IV~_3"; all added.
  std::map<std::string, SpectralState> terms_N2;
  SpectralState integral_N1;
  SpectralState integral_N2;
  double residual_N1 = 0.0;
  double residual_N2 = 0.0;

  SpectralState sum_N1() const;
  SpectralState sum_N2() const;
};

// Xi(n, t) = 2 Im sum_{Gamma(n)} exp(i t theta) w_{n1} conj(w_{n2}) w_{n3} conj(w_n).
double xi(const SpectralState& state, int n, double t, const Beta& beta);

// Integration-by-parts decompositions along a trajectory starting at t = 0 with uniform
// snapshot spacing; `t` must be a snapshot time.
NormalFormTermsV nf_decompose_v(const Trajectory& traj, double t, const ModelParams& params);
NormalFormTermsW nf_decompose_w(const Trajectory& traj, double t, const ModelParams& params);

// K_j(t)(u0) = Psi_j(t)(u0) - u0 with u0 read as v (j = 0) or w (j = 1) data at time 0.
SpectralState remainder_K(const SpectralState& u0, double t, int j, const ModelParams& params,
                          double dt);

}  // namespace tnls
