#include "oracles.hpp"

#include "tnls/spectral.hpp"

#include <doctest.h>

#include <sstream>

using namespace tnls;

TEST_SUITE("spectral") {
  TEST_CASE("single-mode construction is the constant function") {
    CVec c(3);
    c << 0, 1, 0;
    const SpectralState s = make_state(1, c, Rep::u, 0.0);
    CHECK(s.N() == 1);
    CHECK(s[0] == cplx(1, 0));
    CHECK(s.at(-1) == cplx(0));
    CHECK_THROWS_AS(s.at(2), IndexError);
  }

  TEST_CASE("coefficient length must be 2N+1") {
    CHECK_THROWS_AS(make_state(2, CVec::Zero(4), Rep::u, 0.0), DimensionError);
    CHECK_THROWS_AS(make_state(0, CVec::Zero(1), Rep::u, 0.0), DimensionError);
    CVec bad = CVec::Zero(3);
    bad[1] = cplx(std::nan(""), 0);
    CHECK_THROWS_AS(make_state(1, bad, Rep::u, 0.0), ValidationError);
  }

  TEST_CASE("zero state has zero norm for every s") {
    const SpectralState z = make_state(8, CVec::Zero(17), Rep::u, 0.0);
    for (double s : {-1.0, 0.0, 0.5, 3.0}) CHECK(sobolev_norm(z, s) == 0.0);
  }

  TEST_CASE("Sobolev norm examples") {
    SpectralState a = zero_state(3);
    a[2] = 1;
    CHECK(sobolev_norm(a, 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
    SpectralState b = zero_state(3);
    b[0] = 3;
    b[1] = 4;
    CHECK(sobolev_norm(b, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  }

  TEST_CASE("Parseval consistency on random states") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int N = 1 + trial;
      const CVec c = oracle::random_coeffs(rng, N, [](int) { return 1.0; }, 1.0 + trial);
      const double n0 = sobolev_norm(c, 0.0);
      CHECK(std::abs(n0 * n0 - c.squaredNorm()) <= 1e-14 * c.squaredNorm());
    }
  }

  TEST_CASE("single-mode cubic products") {
    const cplx a(0.7, -1.3);
    for (int n : {-3, 0, 2}) {
      SpectralState s = zero_state(4);
      s[n] = a;
      const double m = std::norm(a);
      const SpectralState raw = cubic_terms_fft(s, false), ren = cubic_terms_fft(s, true);
      for (int k = -4; k <= 4; ++k) {
        const cplx want = k == n ? m * a : cplx(0);
        CHECK(std::abs(raw[k] - want) <= 1e-13);
        CHECK(std::abs(ren[k] + want) <= 1e-13);
      }
    }
  }

  TEST_CASE("transform products match the direct triple sum") {
    std::mt19937_64 rng(12);
    for (int N : {1, 2, 5, 8, 13, 16, 24, 32}) {
      for (int trial = 0; trial < 4; ++trial) {
        const CVec c = oracle::random_coeffs(rng, N, [](int n) { return 1.0 / oracle::japanese(n); }, 2.0);
        const SpectralState s = make_state(N, c, Rep::u, 0.0);
        const CVec ref = oracle::triple_sum(c, N);
        CHECK((cubic_terms_fft(s, false).coeffs - ref).cwiseAbs().maxCoeff() <= 1e-11);
        CHECK((cubic_terms_fft(s, true).coeffs - (ref - 2.0 * oracle::mass(c) * c)).cwiseAbs().maxCoeff() <=
              1e-11);
        CHECK((cubic_terms_direct(s, TripleFilter::all).coeffs - ref).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }

  TEST_CASE("direct filters") {
    SpectralState one = zero_state(4);
    one[1] = cplx(2, 1);
    CHECK(cubic_terms_direct(one, TripleFilter::gamma, Beta::real(2.1)).coeffs.norm() == 0.0);
    const SpectralState d = cubic_terms_direct(one, TripleFilter::diagonal);
    CHECK(std::abs(d[1] - 5.0 * cplx(2, 1)) <= 1e-14);

    SpectralState pair = zero_state(3);
    pair[2] = 1;
    pair[-1] = 1;
    pair[0] = 1;
    const Beta b = Beta::parse("3/2");
    const SpectralState shell = cubic_terms_direct(pair, TripleFilter::resonant_shell, b);
    const CVec ref = oracle::triple_sum(pair.coeffs, 3, [](int n, int n1, int, int n3) {
      return n1 != n && n3 != n && n1 + n3 == 1;
    });
    CHECK(shell.coeffs.norm() > 0.5);
    CHECK((shell.coeffs - ref).norm() <= 1e-14);
  }

  TEST_CASE("filter partition with the mass term") {
    std::mt19937_64 rng(13);
    for (const char* beta : {"0", "3/2", "2.1", "3"}) {
      const Beta b = Beta::parse(beta);
      const CVec c = oracle::random_coeffs(rng, 7, [](int) { return 1.0; }, 1.5);
      const SpectralState s = make_state(7, c, Rep::u, 0.0);
      const CVec all = cubic_terms_direct(s, TripleFilter::all, b).coeffs;
      const CVec parts = cubic_terms_direct(s, TripleFilter::gamma, b).coeffs -
                         cubic_terms_direct(s, TripleFilter::diagonal, b).coeffs +
                         cubic_terms_direct(s, TripleFilter::resonant_shell, b).coeffs;
      CHECK((all - 2.0 * oracle::mass(c) * c - parts).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }

  TEST_CASE("quartic mean matches the convolution sum") {
    std::mt19937_64 rng(14);
    for (int N : {1, 4, 9}) {
      const CVec c = oracle::random_coeffs(rng, N, [](int) { return 1.0; }, 1.3);
      CHECK(quartic_mean(c, N) == doctest::Approx(oracle::quartic(c, N)).epsilon(1e-13));
    }
  }

  TEST_CASE("snapshot round trip is exact") {
    std::mt19937_64 rng(15);
    const CVec c = oracle::random_coeffs(rng, 5, [](int) { return 1.0; }, 3.0);
    const SpectralState s = make_state(5, c, Rep::w, 0.123456789);
    std::stringstream io;
    write_snapshot(io, s);
    const SpectralState r = read_snapshot(io);
    CHECK(r.N() == 5);
    CHECK(r.rep == Rep::w);
    CHECK(r.time == s.time);
    CHECK(r.coeffs == s.coeffs);
    std::stringstream broken("-2 2 0 u\n-2 0 0\n");
    CHECK_THROWS_AS(read_snapshot(broken), DimensionError);
  }
}
