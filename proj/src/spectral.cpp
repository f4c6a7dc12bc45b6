#include "tnls/spectral.hpp"

#define EIGEN_FFTW_DEFAULT
#include <unsupported/Eigen/FFT>

#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

namespace tnls {

namespace {

// FFTW planning is not thread-safe; plans are created once per thread and length.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Workspace {
  int M;
  Eigen::FFT<double> fft;
  CVec freq, phys;

  explicit Workspace(int m) : M(m), freq(CVec::Zero(m)), phys(CVec::Zero(m)) {
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fft.inv(phys, freq);
    fft.fwd(freq, phys);
  }

  // Fill the padded spectrum and transform to grid values.
  void to_grid(const CVec& c, int N) {
    freq.setZero();
    for (int n = -N; n <= N; ++n) freq[(n + M) % M] = c[n + N];
    fft.inv(phys, freq);
  }
  void to_modes(CVec& out, int N) {
    fft.fwd(freq, phys);
    out.resize(2 * N + 1);
    const double inv_m = 1.0 / M;
    for (int n = -N; n <= N; ++n) out[n + N] = freq[(n + M) % M] * inv_m;
  }
};

Workspace& workspace(int M) {
  thread_local std::map<int, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[M];
  if (!slot) slot = std::make_unique<Workspace>(M);
  return *slot;
}

}  // namespace

SpectralState make_state(int N, const CVec& coeffs, Rep rep, double t) {
  if (N < 1) throw DimensionError("truncation N must be positive");
  if (coeffs.size() != 2 * N + 1)
    throw DimensionError("expected " + std::to_string(2 * N + 1) + " coefficients, got " +
                         std::to_string(coeffs.size()));
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (!std::isfinite(coeffs[i].real()) || !std::isfinite(coeffs[i].imag()))
      throw ValidationError("non-finite coefficient at mode " + std::to_string(i - N));
  if (!std::isfinite(t)) throw ValidationError("non-finite time tag");
  return SpectralState{FrequencyGrid::make(N), coeffs, t, rep};
}

SpectralState zero_state(int N, Rep rep, double t) {
  return make_state(N, CVec::Zero(2 * N + 1), rep, t);
}

SpectralState with_coeffs(const SpectralState& like, CVec coeffs) {
  SpectralState out{like.grid, std::move(coeffs), like.time, like.rep};
  if (out.coeffs.size() != like.grid.size()) throw DimensionError("coefficient length mismatch");
  return out;
}

double sobolev_norm(const CVec& c, double s) {
  const int N = static_cast<int>(c.size() - 1) / 2;
  double acc = 0.0;
  for (int n = -N; n <= N; ++n) acc += std::pow(1.0 + double(n) * n, s) * std::norm(c[n + N]);
  return std::sqrt(acc);
}

double sobolev_norm(const SpectralState& state, double s) { return sobolev_norm(state.coeffs, s); }

double mass(const CVec& c) { return c.squaredNorm(); }

void cubic_fft(const CVec& c, int N, bool renormalized, CVec& out) {
  Workspace& ws = workspace(FrequencyGrid::make(N).transform_length);
  ws.to_grid(c, N);
  for (int j = 0; j < ws.M; ++j) ws.phys[j] *= std::norm(ws.phys[j]);
  ws.to_modes(out, N);
  if (renormalized) out -= (2.0 * mass(c)) * c;
}

SpectralState cubic_terms_fft(const SpectralState& state, bool renormalized) {
  CVec out;
  cubic_fft(state.coeffs, state.N(), renormalized, out);
  return with_coeffs(state, std::move(out));
}

double quartic_mean(const CVec& c, int N) {
  Workspace& ws = workspace(FrequencyGrid::make(N).transform_length);
  ws.to_grid(c, N);
  double acc = 0.0;
  for (int j = 0; j < ws.M; ++j) acc += std::norm(ws.phys[j]) * std::norm(ws.phys[j]);
  return acc / ws.M;
}

SpectralState cubic_terms_direct(const SpectralState& state, TripleFilter filter,
                                 const Beta& beta) {
  const int N = state.N();
  CVec out = CVec::Zero(2 * N + 1);
  if (filter == TripleFilter::resonant_shell && !beta.resonant()) return with_coeffs(state, out);
  for (int n = -N; n <= N; ++n) {
    cplx acc = 0.0;
    for (int n1 = -N; n1 <= N; ++n1) {
      for (int n3 = -N; n3 <= N; ++n3) {
        const int n2 = n1 + n3 - n;
        if (n2 < -N || n2 > N) continue;
        const bool off = n != n1 && n != n3;
        bool keep = true;
        switch (filter) {
          case TripleFilter::all: break;
          case TripleFilter::gamma: keep = off && !beta.on_shell(n1 + n3); break;
          case TripleFilter::diagonal: keep = n1 == n && n3 == n; break;
          case TripleFilter::resonant_shell: keep = off && beta.on_shell(n1 + n3); break;
        }
        if (keep) acc += state[n1] * std::conj(state[n2]) * state[n3];
      }
    }
    out[n + N] = acc;
  }
  return with_coeffs(state, out);
}

void write_snapshot(std::ostream& os, const SpectralState& state) {
  const int N = state.N();
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << -N << ' ' << N << ' ' << state.time << ' ' << rep_name(state.rep) << '\n';
  for (int n = -N; n <= N; ++n) buf << n << ' ' << state[n].real() << ' ' << state[n].imag() << '\n';
  os << buf.str();
}

SpectralState read_snapshot(std::istream& is) {
  int n_min = 0, n_max = 0;
  double t = 0.0;
  std::string rep;
  if (!(is >> n_min >> n_max >> t >> rep)) throw ValidationError("malformed snapshot header");
  if (n_min != -n_max || n_max < 1) throw DimensionError("snapshot mode range must be [-N, N]");
  const int N = n_max;
  CVec c(2 * N + 1);
  for (int k = -N; k <= N; ++k) {
    int n = 0;
    double re = 0.0, im = 0.0;
    if (!(is >> n >> re >> im)) throw DimensionError("snapshot truncated at mode " + std::to_string(k));
    if (n != k) throw ValidationError("snapshot modes must be listed in ascending order");
    c[k + N] = cplx(re, im);
  }
  return make_state(N, c, rep_from_name(rep), t);
}

void save_snapshot(const std::string& path, const SpectralState& state) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_snapshot(os, state);
  if (!os) throw IoError("write to '" + path + "' failed");
}

SpectralState load_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  return read_snapshot(is);
}

}  // namespace tnls
