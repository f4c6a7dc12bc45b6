#pragma once

#include "tnls/types.hpp"

namespace tnls {

// Per-mode multiplier exp(-i t (n^3 - beta n^2)).
CVec propagator_phases(int N, double t, double beta);

// S(t); advances the time tag by t and keeps the representation.
SpectralState linear_propagator(const SpectralState& state, double t, const ModelParams& params);

// G_t[f] = exp(2 i t sum|f_n|^2) f. Forward maps u -> u_gauged.
SpectralState gauge_G(const SpectralState& state, double t, GaugeDirection dir);

// J_t[f]_n = exp(-i t |f_n|^2) f_n. Forward maps u_gauged -> u_j.
SpectralState gauge_J(const SpectralState& state, double t, GaugeDirection dir);

// Forward: S(-t) at t = state.time, u_gauged -> v or u_j -> w. Inverse undoes it.
SpectralState interaction_map(const SpectralState& state, GaugeDirection dir,
                              const ModelParams& params);

// Tag-agnostic coefficient versions used by the measure experiments.
CVec apply_G(const CVec& c, double t);
CVec apply_J(const CVec& c, double t);

}  // namespace tnls
