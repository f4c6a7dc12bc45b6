#pragma once

#include "tnls/types.hpp"

#include <iosfwd>
#include <string>

namespace tnls {

SpectralState make_state(int N, const CVec& coeffs, Rep rep, double t);
SpectralState zero_state(int N, Rep rep = Rep::u, double t = 0.0);
// Same grid and tags as `like`, new coefficients.
SpectralState with_coeffs(const SpectralState& like, CVec coeffs);

double sobolev_norm(const SpectralState& state, double s);
double sobolev_norm(const CVec& coeffs, double s);
double mass(const CVec& coeffs);

// Galerkin projection of |u|^2 u (or (|u|^2 - 2 mean|u|^2) u) via padded transforms.
SpectralState cubic_terms_fft(const SpectralState& state, bool renormalized);
// Coefficient-level kernel used by the integrators; `out` is resized to 2N+1.
void cubic_fft(const CVec& coeffs, int N, bool renormalized, CVec& out);
// Mean of |u|^4 over the circle, exact for the truncated state.
double quartic_mean(const CVec& coeffs, int N);

enum class TripleFilter { all, gamma, diagonal, resonant_shell };

// Direct sum over n = n1 - n2 + n3 restricted by `filter`.
SpectralState cubic_terms_direct(const SpectralState& state, TripleFilter filter,
                                 const Beta& beta = Beta::real(0.0));

// Snapshot file: header `n_min n_max time rep`, then `n re im` per mode, n ascending.
void write_snapshot(std::ostream& os, const SpectralState& state);
SpectralState read_snapshot(std::istream& is);
void save_snapshot(const std::string& path, const SpectralState& state);
SpectralState load_snapshot(const std::string& path);

}  // namespace tnls
