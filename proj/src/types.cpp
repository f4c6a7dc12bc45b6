#include "tnls/types.hpp"

#include <cmath>
#include <numeric>
#include <charconv>

namespace tnls {

const char* rep_name(Rep r) {
  switch (r) {
    case Rep::u: return "u";
    case Rep::u_gauged: return "u_gauged";
    case Rep::u_j: return "u_j";
    case Rep::v: return "v";
    case Rep::w: return "w";
  }
  return "?";
}

Rep rep_from_name(const std::string& s) {
  for (Rep r : {Rep::u, Rep::u_gauged, Rep::u_j, Rep::v, Rep::w})
    if (s == rep_name(r)) return r;
  throw ValidationError("unknown representation tag '" + s + "'");
}

Beta Beta::real(double x) {
  if (!std::isfinite(x)) throw ValidationError("beta must be finite");
  Beta b;
  b.value_ = x;
  return b;
}

Beta Beta::rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw ValidationError("beta denominator must be nonzero");
  if (q < 0) p = -p, q = -q;
  const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  Beta b;
  b.num_ = p / g;
  b.den_ = q / g;
  b.value_ = static_cast<double>(b.num_) / static_cast<double>(b.den_);
  return b;
}

Beta Beta::parse(const std::string& text) {
  const auto slash = text.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double x = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return real(x);
    }
    const std::string ps = text.substr(0, slash), qs = text.substr(slash + 1);
    std::size_t up = 0, uq = 0;
    const long long p = std::stoll(ps, &up);
    const long long q = std::stoll(qs, &uq);
    if (up != ps.size() || uq != qs.size()) throw std::invalid_argument(text);
    return rational(p, q);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("cannot parse '" + text + "' as a real or rational p/q");
  }
}

bool Beta::on_shell(std::int64_t k) const {
  if (exact()) return 3 * den_ * k == 2 * num_;
  return std::abs(static_cast<double>(k) - shell()) <= 1e-9;
}

bool Beta::resonant() const {
  if (exact()) return (2 * num_) % (3 * den_) == 0;
  return std::abs(shell() - std::round(shell())) <= 1e-9;
}

double Beta::margin() const {
  if (resonant()) return 0.0;
  return std::abs(shell() - std::round(shell()));
}

std::string Beta::str() const {
  if (exact()) return std::to_string(num_) + "/" + std::to_string(den_);
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, res.ptr);
}

void ModelParams::validate() const {
  if (!(sigma < s - 0.5))
    throw ValidationError("sigma must satisfy sigma < s - 1/2 (got sigma=" + std::to_string(sigma) +
                          ", s=" + std::to_string(s) + ")");
  if (!(epsilon > 0)) throw ValidationError("epsilon must be positive");
}

void ModelParams::require_nonresonant() const {
  if (beta.resonant())
    throw NonResonanceError("2*beta/3 is an integer (beta=" + beta.str() +
                            "); interaction forms need a non-resonant beta");
}

FrequencyGrid FrequencyGrid::make(int N) {
  if (N < 1) throw ValidationError("truncation N must be positive");
  // Smallest 3-smooth length >= 4N+1.
  int m = 4 * N + 1;
  for (;; ++m) {
    int r = m;
    for (int p : {2, 3})
      while (r % p == 0) r /= p;
    if (r == 1) break;
  }
  return FrequencyGrid{N, m};
}

cplx SpectralState::at(int n) const {
  if (!grid.contains(n))
    throw IndexError("mode " + std::to_string(n) + " outside [-" + std::to_string(grid.N) + ", " +
                     std::to_string(grid.N) + "]");
  return (*this)[n];
}

}  // namespace tnls
