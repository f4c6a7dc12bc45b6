#include "oracles.hpp"

#include "tnls/gauges.hpp"
#include "tnls/spectral.hpp"

#include <doctest.h>

#include <numbers>

using namespace tnls;

namespace {

SpectralState random_state(std::mt19937_64& rng, int N, Rep rep, double t) {
  return make_state(N, oracle::random_coeffs(rng, N, [](int n) { return 1.0 / oracle::japanese(n); }, 1.7), rep, t);
}

}  // namespace

TEST_SUITE("gauges") {
  TEST_CASE("propagator solves the linear equation mode by mode") {
    // i u_t - i u_xxx - beta u_xx = 0 on e^{inx} gives u_t = -i (n^3 - beta n^2) u.
    const ModelParams p;
    const double beta = p.beta.value(), h = 1e-6;
    for (int n = -5; n <= 5; ++n) {
      const cplx fd = (propagator_phases(5, h, beta)[n + 5] - propagator_phases(5, -h, beta)[n + 5]) / (2 * h);
      const double pn = double(n) * n * n - beta * n * n;
      CHECK(std::abs(fd - cplx(0, -pn)) <= 1e-6 * (1 + std::abs(pn)));
    }
  }

  TEST_CASE("propagator identity at t = 0, group law, unitarity") {
    std::mt19937_64 rng(31);
    const ModelParams p;
    const SpectralState s = random_state(rng, 9, Rep::u, 0.0);
    CHECK(linear_propagator(s, 0.0, p).coeffs == s.coeffs);
    const SpectralState a = linear_propagator(linear_propagator(s, 0.3, p), 0.45, p);
    const SpectralState b = linear_propagator(s, 0.75, p);
    CHECK((a.coeffs - b.coeffs).norm() <= 1e-13);
    CHECK(b.time == doctest::Approx(0.75));
    for (int n = -9; n <= 9; ++n) CHECK(std::abs(std::abs(b[n]) - std::abs(s[n])) <= 1e-14);
  }

  TEST_CASE("G on a constant function and at t = 0") {
    SpectralState c = zero_state(3);
    const cplx a(0.6, 0.8);
    c[0] = a;
    const double t = 0.37;
    const SpectralState g = gauge_G(c, t, GaugeDirection::forward);
    CHECK(std::abs(g[0] - std::exp(cplx(0, 2 * t * std::norm(a))) * a) <= 1e-15);
    CHECK(g.rep == Rep::u_gauged);
    std::mt19937_64 rng(32);
    const SpectralState s = random_state(rng, 6, Rep::u, 0.0);
    CHECK(gauge_G(s, 0.0, GaugeDirection::forward).coeffs == s.coeffs);
  }

  TEST_CASE("J example and round trips") {
    SpectralState f = zero_state(2, Rep::u_gauged);
    f[0] = 1;
    CHECK(std::abs(gauge_J(f, std::numbers::pi, GaugeDirection::forward)[0] - cplx(-1, 0)) <= 1e-15);
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
      const SpectralState u = random_state(rng, 7, Rep::u, 0.0);
      const double t = 0.1 * trial;
      const SpectralState g = gauge_G(u, t, GaugeDirection::forward);
      const SpectralState j = gauge_J(g, t, GaugeDirection::forward);
      for (int n = -7; n <= 7; ++n) {
        CHECK(std::abs(std::abs(g[n]) - std::abs(u[n])) <= 1e-14);
        CHECK(std::abs(std::abs(j[n]) - std::abs(u[n])) <= 1e-14);
      }
      CHECK((gauge_G(gauge_J(j, t, GaugeDirection::inverse), t, GaugeDirection::inverse).coeffs - u.coeffs)
                .norm() <= 1e-13);
      CHECK(std::abs(j.coeffs.squaredNorm() - u.coeffs.squaredNorm()) <= 1e-13 * u.coeffs.squaredNorm());
    }
    CHECK_THROWS_AS(gauge_J(zero_state(2, Rep::u), 1.0, GaugeDirection::forward), ContractError);
  }

  TEST_CASE("interaction map") {
    const ModelParams p;
    std::mt19937_64 rng(34);
    const SpectralState g0 = random_state(rng, 5, Rep::u_gauged, 0.0);
    const SpectralState v0 = interaction_map(g0, GaugeDirection::forward, p);
    CHECK(v0.rep == Rep::v);
    CHECK(v0.coeffs == g0.coeffs);
    const SpectralState g = random_state(rng, 5, Rep::u_j, 0.8);
    const SpectralState w = interaction_map(g, GaugeDirection::forward, p);
    CHECK(w.rep == Rep::w);
    for (int n = -5; n <= 5; ++n) {
      const double pn = oracle::phase(n, 0, 0, 0, p.beta.value());
      CHECK(std::abs(w[n] - std::exp(cplx(0, 0.8 * pn)) * g[n]) <= 1e-13);
    }
    const SpectralState back = interaction_map(w, GaugeDirection::inverse, p);
    CHECK(back.rep == Rep::u_j);
    CHECK((back.coeffs - g.coeffs).norm() <= 1e-14);
  }
}
