#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace tnls {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

// Error hierarchy. Each class maps to a stable `kind()` string used in error reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};
#define TNLS_ERROR(Name, Tag)                                   \
  struct Name : Error {                                         \
    using Error::Error;                                         \
    const char* kind() const noexcept override { return Tag; } \
  }
TNLS_ERROR(DimensionError, "dimension");
TNLS_ERROR(ValidationError, "validation");
TNLS_ERROR(ContractError, "contract");
TNLS_ERROR(IndexError, "index");
TNLS_ERROR(NonResonanceError, "non_resonance");
TNLS_ERROR(StepFailure, "step_failure");
TNLS_ERROR(QuadratureError, "quadrature");
TNLS_ERROR(CapacityError, "capacity");
TNLS_ERROR(StepSizeError, "step_size");
TNLS_ERROR(IoError, "io");
#undef TNLS_ERROR

// u: physical; u_gauged: after G_t; u_j: after J_t; v = S(-t)u_gauged; w = S(-t)u_j.
enum class Rep { u, u_gauged, u_j, v, w };

const char* rep_name(Rep r);
Rep rep_from_name(const std::string& s);

enum class GaugeDirection { forward, inverse };

// Dispersion coefficient. Kept as an exact rational when supplied as p/q so that
// the resonant shell n1 + n3 = 2*beta/3 is decided exactly.
class Beta {
 public:
  Beta() = default;
  static Beta real(double x);
  static Beta rational(std::int64_t p, std::int64_t q);
  static Beta parse(const std::string& text);

  double value() const { return value_; }
  bool exact() const { return den_ != 0; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double shell() const { return 2.0 * value_ / 3.0; }
  bool on_shell(std::int64_t n1_plus_n3) const;
  bool resonant() const;
  double margin() const;
  std::string str() const;

 private:
  double value_ = 0.0;
  std::int64_t num_ = 0, den_ = 0;  // den_ == 0: floating value only
};

struct ModelParams {
  Beta beta = Beta::real(2.1);
  double s = 0.8;
  double sigma = 0.29;
  double epsilon = 0.05;

  double nonres_margin() const { return beta.margin(); }
  // Throws ValidationError unless sigma < s - 1/2 and epsilon > 0.
  void validate() const;
  void require_nonresonant() const;
};

inline double japanese(double n) { return std::sqrt(1.0 + n * n); }
inline double dispersion(int n, double beta) {
  const double x = n;
  return x * x * x - beta * x * x;
}

struct FrequencyGrid {
  int N = 0;
  int transform_length = 1;

  static FrequencyGrid make(int N);
  int size() const { return 2 * N + 1; }
  bool contains(long n) const { return n >= -N && n <= N; }
  int index(int n) const { return n + N; }
  bool operator==(const FrequencyGrid&) const = default;
};

struct SpectralState {
  FrequencyGrid grid;
  CVec coeffs;
  double time = 0.0;
  Rep rep = Rep::u;

  int N() const { return grid.N; }
  cplx operator[](int n) const { return coeffs[n + grid.N]; }
  cplx& operator[](int n) { return coeffs[n + grid.N]; }
  // Bounds-checked access; throws IndexError.
  cplx at(int n) const;
};

}  // namespace tnls
