#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nwidth/exponent.hpp"

namespace nwidth {

using Vector = Eigen::VectorXd;

inline constexpr long kDefaultVertexCap = 1'000'000;

struct Ball {
  Exponent p;
};

// B_p0 ∩ nu B_p1.
struct Intersection {
  Exponent p0;
  Exponent p1;
  double nu;
};

// V_k, the convex hull of all vectors with exactly k entries equal to ±1. Gauge and
// support use V_k = B_inf ∩ k B_1; non-integer k is only allowed with `extrapolated`.
struct VkPolytope {
  double k;
  bool extrapolated = false;
};

// c B_inf.
struct ScaledCube {
  double c;
};

class BodySpec {
 public:
  using Shape = std::variant<Ball, Intersection, VkPolytope, ScaledCube>;

  BodySpec(int m, Shape shape);

  static BodySpec ball(int m, Exponent p) { return {m, Ball{p}}; }
  static BodySpec intersection(int m, Exponent p0, Exponent p1, double nu) { return {m, Intersection{p0, p1, nu}}; }
  static BodySpec vk(int m, double k, bool extrapolated = false) { return {m, VkPolytope{k, extrapolated}}; }
  static BodySpec cube(int m, double c) { return {m, ScaledCube{c}}; }

  // "ball:P", "intersection:P0,P1,NU", "vk:K", "cube:C"; exponents accept "inf".
  static BodySpec parse(std::string_view text, int m);

  int m() const { return m_; }
  const Shape& shape() const { return shape_; }
  std::string to_string() const;

  // Finitely many vertices that are enumerated exactly: V_k (integer k), B_1, B_inf, c B_inf.
  bool is_polytope() const;

 private:
  int m_;
  Shape shape_;
};

double lp_norm(const Eigen::Ref<const Vector>& x, const Exponent& p);

// Minkowski functional of the body; x is in the body iff gauge(body, x) <= 1.
double gauge(const BodySpec& body, const Eigen::Ref<const Vector>& x);

struct SupportResult {
  double value = 0.0;
  Vector point;  // a maximiser of <x, y> over the body
  bool approximate = false;
};

// sup over the body of <x, y>. Closed form except for intersections where both
// constraints are active, which use a numeric search (approximate = true).
SupportResult support(const BodySpec& body, const Eigen::Ref<const Vector>& y);

// All C(m,k) 2^k vectors with exactly k entries equal to ±1. Throws when the count exceeds cap.
std::vector<Vector> vk_vertices(int m, int k, long cap = kDefaultVertexCap);

// {±1}^m. Throws when 2^m exceeds cap.
std::vector<Vector> cube_vertices(int m, long cap = kDefaultVertexCap);

// Vertices of a polytope body (see BodySpec::is_polytope).
std::vector<Vector> polytope_vertices(const BodySpec& body, long cap = kDefaultVertexCap);

// Gauge of conv(vertices) at x by linear programming: min sum(lambda) s.t. V lambda = x,
// lambda >= 0. Returns +inf when x is outside the cone of the vertices.
double hull_gauge(std::span<const Vector> vertices, const Eigen::Ref<const Vector>& x);

// max over the probes y_j = sign(x) restricted to the j largest |x_i|, j = 1..m, of
// <x, y_j> / support(V_k, y_j). Equals the V_k gauge by duality.
double vk_dual_gauge(double k, const Eigen::Ref<const Vector>& x);

// Number of combinations, saturating at LONG_MAX.
long binomial(int n, int k);

struct CertificateReport {
  std::string name;
  std::string params;
  long checks = 0;
  long violations = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return checks > 0 && violations == 0; }
};

// Checks ||x||_q <= ||x||_p1^{1-lambda} ||x||_p0^lambda on e_1, the all-ones vector and
// `samples` seeded Gaussian vectors. lambda_shift perturbs lambda (negative control).
CertificateReport cert_interpolation(const Exponent& p1, const Exponent& p0, const Exponent& q, int m,
                                     long samples, std::uint64_t seed, double lambda_shift = 0.0);

// Every vertex of k^{-1/p0} V_k must have intersection gauge exactly 1 for nu = k^{1/p1-1/p0}.
CertificateReport cert_vkl(const Exponent& p0, const Exponent& p1, int k, int m, long cap = kDefaultVertexCap);

// Cube vertices scaled by k^{1/p1-1/p0} m^{-1/p1} must have intersection gauge exactly 1
// (the p1 constraint is tight). Samples seeded vertices when 2^m exceeds cap.
CertificateReport cert_cube(const Exponent& p0, const Exponent& p1, int k, int m, long cap = kDefaultVertexCap,
                            std::uint64_t seed = 0);

}  // namespace nwidth
