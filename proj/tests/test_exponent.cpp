#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nwidth/exponent.hpp"

using namespace nwidth;

namespace {
const Exponent inf = Exponent::infinity();
Exponent E(double p) { return Exponent(p); }
}  // namespace

TEST_CASE("reciprocal examples") {
  CHECK(reciprocal(E(2)) == 0.5);
  CHECK(reciprocal(inf) == 0.0);
  CHECK(reciprocal(E(1)) == 1.0);
}

TEST_CASE("exponent parsing and validation") {
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("INF").is_infinite());
  CHECK(Exponent::parse("2.5").value() == 2.5);
  CHECK(Exponent::parse("1").inv() == 1.0);
  CHECK_THROWS_AS(Exponent::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::parse("2x"), std::invalid_argument);
  CHECK_THROWS_AS(Exponent::parse("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(E(std::nan("")), std::invalid_argument);
  CHECK(Exponent::from_inverse(0.0).is_infinite());
  CHECK(E(4).conjugate().value() == doctest::Approx(4.0 / 3.0));
  CHECK(E(1).conjugate().is_infinite());
  CHECK(inf.conjugate().inv() == 1.0);
  CHECK(E(1) < E(2));
  CHECK(E(2) < inf);
  CHECK(inf.to_string() == "inf");
  CHECK(E(1.5).to_string() == "1.5");
}

TEST_CASE("interpolation_lambda examples") {
  CHECK(interpolation_lambda(E(1), inf, E(2)) == 0.5);
  CHECK(interpolation_lambda(E(2), E(4), E(4)) == 1.0);
  CHECK(interpolation_lambda(E(2), E(6), E(3)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(interpolation_lambda(E(2), E(4), E(5)), std::invalid_argument);
  CHECK_THROWS_AS(interpolation_lambda(E(4), E(2), E(3)), std::invalid_argument);
}

TEST_CASE("interpolation_lambda reproduces 1/q") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a < b) std::swap(a, b);  // a = 1/p1 > b = 1/p0
    const double t = u(rng);
    const double c = b + t * (a - b);
    const Exponent p1 = Exponent::from_inverse(a), p0 = Exponent::from_inverse(b), q = Exponent::from_inverse(c);
    const double lam = interpolation_lambda(p1, p0, q);
    CHECK(lam >= 0.0);
    CHECK(lam <= 1.0);
    CHECK(std::abs((1 - lam) * a + lam * b - c) <= 1e-12);
  }
}

TEST_CASE("lambda_pq examples") {
  CHECK(lambda_pq(E(1), E(4)) == 1.0);
  CHECK(lambda_pq(E(3), E(4)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(lambda_pq(E(2), E(4)) == 1.0);
  CHECK_THROWS_AS(lambda_pq(E(1), E(2)), std::invalid_argument);
  CHECK_THROWS_AS(lambda_pq(E(1), inf), std::invalid_argument);
  CHECK_THROWS_AS(lambda_pq(E(5), E(4)), std::invalid_argument);
}

TEST_CASE("k_from_nu examples and clamps") {
  CHECK(k_from_nu(2, E(1), inf, 10) == 2.0);
  CHECK(k_from_nu(0.5, E(1), E(2), 10) == 1.0);
  CHECK(k_from_nu(4, E(2), inf, 9) == 9.0);
  CHECK(k_from_nu(1, E(1), E(2), 10) == 1.0);
  CHECK_THROWS_AS(k_from_nu(0.0, E(1), E(2), 10), std::invalid_argument);
  CHECK_THROWS_AS(k_from_nu(2.0, E(2), E(1), 10), std::invalid_argument);
}

TEST_CASE("k_from_nu and nu_from_k are inverse inside the range") {
  for (double p1v : {1.0, 1.5, 2.0, 3.0})
    for (double p0v : {2.5, 4.0, 1e300}) {
      if (p0v <= p1v) continue;
      const Exponent p1 = E(p1v), p0 = p0v > 1e299 ? inf : E(p0v);
      for (double k = 1.0; k <= 50.0; k += 0.75) {
        CHECK(k_from_nu(nu_from_k(k, p1, p0), p1, p0, 50) == doctest::Approx(k).epsilon(1e-12));
      }
    }
}

TEST_CASE("regime_boundary examples") {
  CHECK(regime_boundary(16, 256, E(4)) == doctest::Approx(64).epsilon(1e-14));
  for (double k : {1.0, 3.0, 7.5}) CHECK(regime_boundary(k, 10, E(2)) == doctest::Approx(10).epsilon(1e-14));
  CHECK(regime_boundary(1, 16, E(4)) == doctest::Approx(4).epsilon(1e-14));
  CHECK_THROWS_AS(regime_boundary(1, 16, E(1.5)), std::invalid_argument);
}

TEST_CASE("effective_k examples") {
  CHECK(effective_k(64, 256, E(4)) == 16);
  CHECK(effective_k(16, 16, E(4)) == 16);
  CHECK(effective_k(4, 16, E(4)) == 1);
  CHECK_THROWS_AS(effective_k(0, 16, E(4)), std::invalid_argument);
  CHECK_THROWS_AS(effective_k(4, 16, E(2)), std::invalid_argument);
}

TEST_CASE("effective_k inverts regime_boundary at integer k") {
  for (double qv : {3.0, 4.0, 6.0})
    for (int m : {64, 256, 1024})
      for (int k = 1; k <= m; k *= 2) {
        const double n = regime_boundary(k, m, E(qv));
        if (std::abs(n - std::round(n)) > 1e-9 * n) continue;
        CHECK(effective_k(std::lround(n), m, E(qv)) == k);
      }
}

TEST_CASE("problem params from nu") {
  const auto low = ProblemParams::from_nu(inf, E(1), E(2), 16, 2, 1.0);
  CHECK(low.k == 1.0);
  CHECK(low.clamp == ProblemParams::Clamp::Low);
  const auto high = ProblemParams::from_nu(inf, E(1), E(2), 16, 2, 100.0);
  CHECK(high.k == 16.0);
  CHECK(high.clamp == ProblemParams::Clamp::High);
  CHECK(high.nu_input == 100.0);
  const auto mid = ProblemParams::from_nu(inf, E(1), E(2), 16, 2, 4.0);
  CHECK(mid.k == 4.0);
  CHECK(mid.clamp == ProblemParams::Clamp::None);
  CHECK_THROWS_AS(ProblemParams::from_k(E(1), E(2), E(2), 16, 2, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(ProblemParams::from_k(inf, E(1), E(2), 16, 2, 17.0), std::invalid_argument);
}
