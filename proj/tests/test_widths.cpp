#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nwidth/order.hpp"
#include "nwidth/random.hpp"
#include "nwidth/widths.hpp"
#include "oracles.hpp"

using namespace nwidth;

namespace {
const Exponent inf = Exponent::infinity();
Exponent E(double p) { return std::isinf(p) ? inf : Exponent(p); }
Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}
Subspace diagonal2() {
  Eigen::MatrixXd B(2, 1);
  B << 1, 1;
  return Subspace::from_columns(B);
}
Subspace line(const Vector& b) { return Subspace::from_columns(Eigen::MatrixXd(b)); }
}  // namespace

TEST_CASE("subspace construction") {
  std::mt19937_64 rng(1);
  for (int m = 1; m <= 8; ++m)
    for (int n = 0; n <= m; ++n) {
      Eigen::MatrixXd G(m, n);
      for (int j = 0; j < n; ++j) G.col(j) = gaussian_vector(rng, m);
      const Subspace L = Subspace::from_columns(G);
      CHECK(L.n() == n);
      CHECK(L.orthonormality_error() <= 1e-10);
    }
  Eigen::MatrixXd dep(3, 2);
  dep << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(Subspace::from_columns(dep), std::invalid_argument);
  CHECK_THROWS_AS(Subspace::from_columns(Eigen::MatrixXd::Identity(2, 3)), std::invalid_argument);
  const int axes[] = {0, 2};
  const Subspace C = Subspace::coordinate(4, axes);
  CHECK(C.residual(V({1, 2, 3, 4})) == V({0, 2, 0, 4}));
}

TEST_CASE("dist_to_subspace examples") {
  CHECK(dist_to_subspace(V({1, 0}), diagonal2(), E(2)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(dist_to_subspace(V({1, -1}), diagonal2(), E(1)) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(oracle::dist_to_line(V({1, -1}), V({1, 1}), 1.0) == doctest::Approx(2.0).epsilon(1e-8));
  for (double q : {1.0, 1.5, 2.0, 3.0, oracle::inf}) {
    CHECK(dist_to_subspace(V({2, 2}), diagonal2(), E(q)) <= 1e-9);
    CHECK(dist_with_certificate(V({2, 2}), diagonal2(), E(q)).value <= 1e-9);
  }
}

TEST_CASE("distance to a line matches a one-dimensional search") {
  std::mt19937_64 rng(3);
  for (double q : {1.0, 1.25, 1.5, 2.0, 3.0, 6.0, oracle::inf})
    for (int i = 0; i < 40; ++i) {
      const int m = 2 + i % 5;
      const Vector b = gaussian_vector(rng, m), x = gaussian_vector(rng, m);
      const double ref = oracle::dist_to_line(x, b, q);
      const Subspace L = line(b);
      CHECK(dist_to_subspace(x, L, E(q)) == doctest::Approx(ref).epsilon(1e-7));
      CHECK(dist_with_certificate(x, L, E(q)).value == doctest::Approx(ref).epsilon(1e-7));
    }
}

TEST_CASE("dual certificates are feasible and tight") {
  std::mt19937_64 rng(4);
  for (double q : {1.0, 1.5, 2.0, 4.0, oracle::inf}) {
    const Exponent qe = E(q);
    for (int i = 0; i < 30; ++i) {
      const int m = 3 + i % 4, n = 1 + i % (m - 1);
      Eigen::MatrixXd G(m, n);
      for (int j = 0; j < n; ++j) G.col(j) = gaussian_vector(rng, m);
      const Subspace L = Subspace::from_columns(G);
      const Vector x = gaussian_vector(rng, m);
      const Distance d = dist_with_certificate(x, L, qe);
      CHECK((L.basis().transpose() * d.certificate).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(lp_norm(d.certificate, qe.conjugate()) <= 1.0 + 1e-12);
      CHECK(d.certificate.dot(x) == doctest::Approx(d.value).epsilon(1e-7));
      // Primal and dual routes agree.
      CHECK(dist_to_subspace(x, L, qe) == doctest::Approx(d.value).epsilon(1e-7));
      CHECK(!d.stale);
    }
  }
}

TEST_CASE("deviation examples") {
  CHECK(deviation(BodySpec::ball(2, inf), diagonal2(), E(2)).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const auto dev = deviation(BodySpec::ball(2, inf), diagonal2(), E(2));
  CHECK(dev.exact);
  CHECK(std::abs(dev.worst_point(0) + dev.worst_point(1)) <= 1e-15);  // attained at ±(1, -1)
  const int e1[] = {0};
  CHECK(deviation(BodySpec::ball(2, inf), Subspace::coordinate(2, e1), E(2)).value == 1.0);
  const Subspace full = Subspace::from_columns(Eigen::MatrixXd::Identity(4, 4));
  for (const BodySpec& b : {BodySpec::ball(4, E(2)), BodySpec::vk(4, 2), BodySpec::intersection(4, inf, E(1), 2)})
    for (double q : {1.0, 2.0, 3.0}) CHECK(deviation(b, full, E(q)).value == 0.0);
}

TEST_CASE("polytope deviation equals the vertex maximum") {
  std::mt19937_64 rng(6);
  for (double q : {1.0, 1.5, 2.0, 3.0})
    for (int k = 1; k <= 4; ++k) {
      const Vector b = gaussian_vector(rng, 4);
      double best = 0.0;
      for (const auto& v : oracle::vk_vertices(4, k)) best = std::max(best, oracle::dist_to_line(v, b, q));
      const auto dev = deviation(BodySpec::vk(4, k), line(b), E(q));
      CHECK(dev.exact);
      CHECK(dev.value == doctest::Approx(best).epsilon(1e-7));
    }
}

TEST_CASE("ascent on smooth bodies stays below the true deviation and finds the l2 answer") {
  // Ball(2) in l2: deviation from any subspace is exactly 1.
  std::mt19937_64 rng(8);
  Eigen::MatrixXd G(5, 2);
  G.col(0) = gaussian_vector(rng, 5);
  G.col(1) = gaussian_vector(rng, 5);
  const auto dev = deviation(BodySpec::ball(5, E(2)), Subspace::from_columns(G), E(2));
  CHECK(!dev.exact);
  CHECK(dev.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gauge(BodySpec::ball(5, E(2)), dev.worst_point) <= 1.0 + 1e-12);
}

TEST_CASE("width_upper examples") {
  CHECK(width_upper(BodySpec::ball(2, inf), 1, E(2)).upper == doctest::Approx(width_exact(inf, E(2), 2, 1)).epsilon(1e-12));
  CHECK(width_upper(BodySpec::ball(3, E(1)), 0, E(2)).upper == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(width_upper(BodySpec::ball(3, E(2)), 0, E(1)).upper == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  const auto w = width_upper(BodySpec::ball(4, inf), 1, E(1));
  CHECK(w.upper >= 3.0 - 1e-9);
  CHECK(w.upper <= 3.0 * 1.02);
  CHECK(w.upper_certificate.n() == 1);
  CHECK(w.upper_certificate.orthonormality_error() <= 1e-10);
  CHECK(!w.upper_heuristic);
  CHECK(width_upper(BodySpec::ball(3, E(2)), 3, E(2)).upper == 0.0);
  CHECK_THROWS_AS(width_upper(BodySpec::ball(3, E(2)), 4, E(2)), std::invalid_argument);
  SearchConfig bad;
  bad.ascent_iters = 0;
  CHECK_THROWS_AS(width_upper(BodySpec::ball(3, E(2)), 1, E(2), bad), std::invalid_argument);
}

TEST_CASE("upper profile is nonincreasing and reproduces exact ball widths") {
  for (double p : {1.0, 2.0, oracle::inf})
    for (double q : {1.0, 1.5, 2.0}) {
      if (q > p) continue;
      const auto prof = width_upper_profile(BodySpec::ball(5, E(p)), 4, E(q));
      for (long n = 1; n <= 4; ++n) {
        CHECK(prof[n].upper <= prof[n - 1].upper * (1 + 1e-12));
        const double exact = oracle::ball_width(p, q, 5, static_cast<int>(n));
        CHECK(prof[n].upper >= exact - 1e-9);
        CHECK(prof[n].upper <= 1.02 * exact);
      }
    }
}

TEST_CASE("pca_lower_l2 examples") {
  CHECK(pca_lower_l2(6, 3, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(pca_lower_l2_explicit(6, 3, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(oracle::averaged_pca(oracle::vk_vertices(6, 3), 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(oracle::vk_vertices(6, 3).size() == 160);
  for (int k = 1; k <= 5; ++k) {
    CHECK(pca_lower_l2(5, k, 0) == doctest::Approx(std::sqrt(k)).epsilon(1e-12));
    CHECK(pca_lower_l2(5, k, 5) == doctest::Approx(0.0));
  }
  // Above the cap the symmetric closed form is used.
  CHECK(pca_lower_l2(40, 20, 10) == doctest::Approx(std::sqrt(20.0 * 30 / 40)).epsilon(1e-12));
  CHECK_THROWS_AS(pca_lower_l2_explicit(40, 20, 10), std::length_error);
  CHECK_THROWS_AS(pca_lower_l2(5, 6, 1), std::invalid_argument);
}

TEST_CASE("explicit orbit averaging matches the brute-force oracle") {
  for (int m = 1; m <= 6; ++m)
    for (int k = 1; k <= m; ++k)
      for (int n = 0; n <= m; ++n)
        CHECK(pca_lower_l2_explicit(m, k, n) ==
              doctest::Approx(oracle::averaged_pca(oracle::vk_vertices(m, k), n)).epsilon(1e-10));
}

TEST_CASE("transfer_lower examples") {
  CHECK(transfer_lower(E(2), 10, 1.7) == 1.7);
  CHECK(transfer_lower(E(4), 16, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(transfer_lower(E(6), 64, pca_lower_l2(64, 4, 16)) == doctest::Approx(0.25 * std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(transfer_lower(E(1.5), 16, 2), std::invalid_argument);
}

TEST_CASE("width_bounds examples") {
  const auto a = width_bounds(BodySpec::ball(4, inf), 1, E(1));
  CHECK(a.lower == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(a.lower_method == LowerMethod::ExactThmB);
  CHECK(a.upper == doctest::Approx(3.0).epsilon(0.02));

  const auto b = width_bounds(BodySpec::vk(6, 3), 2, E(2));
  CHECK(b.lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(b.lower_method == LowerMethod::PcaL2);
  CHECK(b.upper >= std::sqrt(2.0) - 1e-12);

  const auto c = width_bounds(BodySpec::intersection(6, inf, E(1), 3), 2, E(2));
  CHECK(c.lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(c.lower_method == LowerMethod::PcaL2);
}

TEST_CASE("lower never exceeds upper") {
  const std::vector<BodySpec> bodies{BodySpec::ball(6, E(1)), BodySpec::ball(6, E(1.5)),
                                     BodySpec::ball(6, E(3)), BodySpec::ball(6, inf),
                                     BodySpec::vk(6, 2), BodySpec::vk(6, 4),
                                     BodySpec::intersection(6, inf, E(1), 2.5), BodySpec::cube(6, 0.5)};
  SearchConfig cfg;
  cfg.restarts = 3;
  for (const auto& body : bodies)
    for (double q : {1.0, 2.0, 4.0}) {
      const auto prof = width_upper_profile(body, 5, E(q), cfg);
      for (long n = 0; n <= 5; ++n) {
        const auto lb = best_lower(body, n, E(q));
        CHECK(lb.value <= prof[n].upper * (1 + 1e-9));
      }
    }
}

TEST_CASE("best_lower methods") {
  CHECK(best_lower(BodySpec::ball(6, inf), 2, E(2)).method == LowerMethod::ExactThmB);
  CHECK(best_lower(BodySpec::cube(6, 0.5), 2, E(1)).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(best_lower(BodySpec::vk(16, 4), 4, E(4)).method == LowerMethod::NormTransfer);
  CHECK(best_lower(BodySpec::vk(6, 3), 6, E(2)).method == LowerMethod::None);
  CHECK(std::string(to_string(LowerMethod::PcaL2)) == "PCA-l2");
}

TEST_CASE("search is deterministic and independent of the thread count") {
  const BodySpec body = BodySpec::intersection(10, inf, E(1), 3);
  SearchConfig cfg;
  cfg.seed = 42;
  const auto a = width_bounds(body, 3, E(2), cfg);
  const auto b = width_bounds(body, 3, E(2), cfg);
  cfg.threads = 4;
  const auto c = width_bounds(body, 3, E(2), cfg);
  CHECK(a.upper == b.upper);
  CHECK(a.upper == c.upper);
  CHECK(a.upper_certificate.basis() == c.upper_certificate.basis());
  CHECK(a.lower == c.lower);
}
