#pragma once

#include "tnls/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tnls {

enum class EquationKind { original, renormalized, v_form, w_form };

const char* kind_name(EquationKind k);
EquationKind kind_from_name(const std::string& s);
Rep rep_for(EquationKind k);

struct Trajectory {
  ModelParams params;
  EquationKind kind = EquationKind::original;
  std::vector<double> times;
  std::vector<SpectralState> states;
};

// Time derivative. Physical kinds include the dispersive term; interaction kinds carry it in phases.
SpectralState rhs(EquationKind kind, const SpectralState& state, double t, const ModelParams& params);
// Same derivative from direct triple sums over Gamma(n); O(N^3) reference.
SpectralState rhs_direct(EquationKind kind, const SpectralState& state, double t,
                         const ModelParams& params);

// One RK4 step (integrating-factor form for the physical kinds).
SpectralState step(EquationKind kind, const SpectralState& state, double t, double dt,
                   const ModelParams& params);

// Called with (step index, state) for the initial state and after every step.
using StepObserver = std::function<void(long, const SpectralState&)>;

// Number of steps used for [t0, t0 + t_final]; dt is shrunk to divide the interval evenly.
long step_count(double t_final, double dt);

// Integrates from u0.time over t_final; returns the final state.
SpectralState evolve_observed(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                              const ModelParams& params, const StepObserver& observer);

// Interaction kinds only: also integrates the split-off part of the nonlinearity using the
// RK4 stage values, i|v_n|^2 v_n for v_form and -i t Xi(n) w_n for w_form.
SpectralState evolve_split(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                           const ModelParams& params, const StepObserver& observer,
                           CVec& integral);

// Snapshots every `snapshot_stride` steps plus both endpoints.
Trajectory evolve(EquationKind kind, const SpectralState& u0, double t_final, double dt,
                  const ModelParams& params, int snapshot_stride = 1);

struct Conserved {
  double M = 0.0;
  double H = 0.0;
};
Conserved conserved_quantities(const SpectralState& state, const ModelParams& params);

// Maps a state in any representation back to physical variables at its time tag.
SpectralState to_physical(const SpectralState& state, const ModelParams& params);

// w-equation pieces at time t from the transform path: derivative and Xi(n) = d/dt |w_n|^2.
void w_form_terms(const CVec& w, double t, double beta, CVec& dwdt, Eigen::VectorXd& xi);

}  // namespace tnls
