#include "nwidth/bodies.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nwidth/format.hpp"
#include "nwidth/random.hpp"
#include "nwidth/simplex.hpp"

namespace nwidth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

void check_dim(const BodySpec& body, Eigen::Index n) {
  if (n != body.m()) throw std::invalid_argument("dimension mismatch: vector length differs from body dimension");
}

std::vector<int> order_by_magnitude(const Eigen::Ref<const Vector>& y) {
  std::vector<int> idx(static_cast<std::size_t>(y.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(y(a)) > std::abs(y(b)); });
  return idx;
}

// Maximiser of <x, y> over B_inf ∩ t B_1 for real t >= 0: fractional knapsack.
SupportResult box_l1_support(const Eigen::Ref<const Vector>& y, double t) {
  const int m = static_cast<int>(y.size());
  SupportResult r;
  r.point = Vector::Zero(m);
  const auto idx = order_by_magnitude(y);
  double budget = std::min(t, static_cast<double>(m));
  for (int i = 0; i < m && budget > 0.0; ++i) {
    const double amount = std::min(1.0, budget);
    r.point(idx[i]) = amount * sign_of(y(idx[i]));
    budget -= amount;
  }
  r.value = r.point.dot(y);
  return r;
}

SupportResult ball_support(const Eigen::Ref<const Vector>& y, const Exponent& p) {
  const int m = static_cast<int>(y.size());
  SupportResult r;
  r.point = Vector::Zero(m);
  const double scale = y.cwiseAbs().maxCoeff();
  if (m == 0 || scale == 0.0) return r;
  if (p.is_infinite()) {
    for (int i = 0; i < m; ++i) r.point(i) = sign_of(y(i));
  } else if (p.inv() == 1.0) {
    Eigen::Index j = 0;
    y.cwiseAbs().maxCoeff(&j);
    r.point(j) = sign_of(y(j));
  } else {
    // x_j ∝ sign(y_j) |y_j|^{p'-1}, with p' - 1 = 1/(p - 1).
    const double e = 1.0 / (p.value() - 1.0);
    for (int i = 0; i < m; ++i) r.point(i) = sign_of(y(i)) * std::pow(std::abs(y(i)) / scale, e);
    r.point /= lp_norm(r.point, p);
  }
  r.value = r.point.dot(y);
  return r;
}

// Subgradient of ||.||_p at x.
Vector norm_subgradient(const Eigen::Ref<const Vector>& x, const Exponent& p) {
  const int m = static_cast<int>(x.size());
  Vector g = Vector::Zero(m);
  const double nx = lp_norm(x, p);
  if (nx == 0.0) return g;
  if (p.is_infinite()) {
    Eigen::Index j = 0;
    x.cwiseAbs().maxCoeff(&j);
    g(j) = sign_of(x(j));
  } else if (p.inv() == 1.0) {
    for (int i = 0; i < m; ++i) g(i) = x(i) == 0.0 ? 0.0 : sign_of(x(i));
  } else {
    for (int i = 0; i < m; ++i) g(i) = sign_of(x(i)) * std::pow(std::abs(x(i)) / nx, p.value() - 1.0);
  }
  return g;
}

// Both constraints active: minimise the gauge over the hyperplane <x, y> = 1 by projected
// subgradient descent; the best point, rescaled to gauge 1, is feasible, so the returned
// value never exceeds the true support.
SupportResult intersection_support_numeric(const Intersection& s, const Eigen::Ref<const Vector>& y, const SupportResult& a,
                                           const SupportResult& b) {
  const double yy = y.squaredNorm();
  auto on_plane = [&](const Vector& x) { return Vector(x / x.dot(y)); };
  auto gauge_of = [&](const Vector& x) { return std::max(lp_norm(x, s.p0), lp_norm(x, s.p1) / s.nu); };

  std::vector<Vector> starts{on_plane(a.point), on_plane(b.point)};
  starts.push_back(on_plane(0.5 * (starts[0] + starts[1])));

  Vector best = starts[0];
  double best_g = gauge_of(best);
  for (const Vector& start : starts) {
    Vector x = start;
    const double step0 = 0.25 * x.norm();
    for (int t = 0; t < 4000; ++t) {
      const double g0 = lp_norm(x, s.p0);
      const double g1 = lp_norm(x, s.p1) / s.nu;
      const double g = std::max(g0, g1);
      if (g < best_g) {
        best_g = g;
        best = x;
      }
      Vector d = g0 >= g1 ? norm_subgradient(x, s.p0) : Vector(norm_subgradient(x, s.p1) / s.nu);
      d -= (d.dot(y) / yy) * y;
      const double dn = d.norm();
      if (dn == 0.0) break;
      x -= (step0 / std::sqrt(1.0 + t)) * d / dn;
    }
  }
  SupportResult r;
  r.point = best / best_g;
  r.value = r.point.dot(y);
  r.approximate = true;
  return r;
}

SupportResult intersection_support(const BodySpec& body, const Intersection& s, const Eigen::Ref<const Vector>& y) {
  const int m = body.m();
  if (s.nu >= nu_from_k(m, s.p1, s.p0)) return ball_support(y, s.p0);
  if (s.nu <= 1.0) {
    SupportResult r = ball_support(y, s.p1);
    r.point *= s.nu;
    r.value *= s.nu;
    return r;
  }
  if (s.p0.is_infinite() && s.p1.inv() == 1.0) return box_l1_support(y, s.nu);

  SupportResult a = ball_support(y, s.p0);
  if (lp_norm(a.point, s.p1) <= s.nu * (1.0 + 1e-12)) return a;
  SupportResult b = ball_support(y, s.p1);
  b.point *= s.nu;
  b.value *= s.nu;
  if (lp_norm(b.point, s.p0) <= 1.0 + 1e-12) return b;
  return intersection_support_numeric(s, y, a, b);
}

}  // namespace

BodySpec::BodySpec(int m, Shape shape) : m_(m), shape_(std::move(shape)) {
  if (m < 1) throw std::invalid_argument("body: m must be positive");
  std::visit(Overloaded{
                 [](const Ball&) {},
                 [](const Intersection& s) {
                   if (!(s.p1 < s.p0)) throw std::invalid_argument("body: intersection needs p1 < p0");
                   if (!(s.nu > 0.0) || !std::isfinite(s.nu))
                     throw std::invalid_argument("body: intersection needs nu > 0");
                 },
                 [m](const VkPolytope& s) {
                   if (!(s.k >= 1.0 && s.k <= m)) throw std::invalid_argument("body: V_k needs 1 <= k <= m");
                   if (s.k != std::floor(s.k) && !s.extrapolated)
                     throw std::invalid_argument("body: V_k with non-integer k requires the extrapolated flag");
                 },
                 [](const ScaledCube& s) {
                   if (!(s.c > 0.0) || !std::isfinite(s.c)) throw std::invalid_argument("body: cube needs c > 0");
                 },
             },
             shape_);
}

BodySpec BodySpec::parse(std::string_view text, int m) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("body: expected KIND:ARGS, got '" + std::string(text) + "'");
  const std::string kind(text.substr(0, colon));
  std::vector<std::string> args;
  std::string_view rest = text.substr(colon + 1);
  while (true) {
    const auto comma = rest.find(',');
    args.emplace_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("body: bad number '" + s + "'");
  };
  if (kind == "ball" && args.size() == 1) return ball(m, Exponent::parse(args[0]));
  if (kind == "intersection" && args.size() == 3)
    return intersection(m, Exponent::parse(args[0]), Exponent::parse(args[1]), number(args[2]));
  if (kind == "vk" && args.size() == 1) return vk(m, number(args[0]));
  if (kind == "vk" && args.size() == 2 && args[1] == "extrapolated") return vk(m, number(args[0]), true);
  if (kind == "cube" && args.size() == 1) return cube(m, number(args[0]));
  throw std::invalid_argument("body: unknown spec '" + std::string(text) + "'");
}

std::string BodySpec::to_string() const {
  return std::visit(Overloaded{
                        [](const Ball& s) { return "ball:" + s.p.to_string(); },
                        [](const Intersection& s) {
                          return "intersection:" + s.p0.to_string() + "," + s.p1.to_string() + "," + format_short(s.nu);
                        },
                        [](const VkPolytope& s) {
                          return "vk:" + format_short(s.k) + (s.extrapolated ? ",extrapolated" : "");
                        },
                        [](const ScaledCube& s) { return "cube:" + format_short(s.c); },
                    },
                    shape_);
}

bool BodySpec::is_polytope() const {
  return std::visit(Overloaded{
                        [](const Ball& s) { return s.p.is_infinite() || s.p.inv() == 1.0; },
                        [](const Intersection&) { return false; },
                        [](const VkPolytope& s) { return !s.extrapolated && s.k == std::floor(s.k); },
                        [](const ScaledCube&) { return true; },
                    },
                    shape_);
}

double lp_norm(const Eigen::Ref<const Vector>& x, const Exponent& p) {
  if (x.size() == 0) return 0.0;
  if (p.is_infinite()) return x.cwiseAbs().maxCoeff();
  if (p.inv() == 1.0) return x.cwiseAbs().sum();
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x(i)) / scale, p.value());
  return scale * std::pow(sum, p.inv());
}

double gauge(const BodySpec& body, const Eigen::Ref<const Vector>& x) {
  check_dim(body, x.size());
  return std::visit(Overloaded{
                        [&](const Ball& s) { return lp_norm(x, s.p); },
                        [&](const Intersection& s) { return std::max(lp_norm(x, s.p0), lp_norm(x, s.p1) / s.nu); },
                        [&](const VkPolytope& s) {
                          return std::max(x.cwiseAbs().maxCoeff(), x.cwiseAbs().sum() / s.k);
                        },
                        [&](const ScaledCube& s) { return x.cwiseAbs().maxCoeff() / s.c; },
                    },
                    body.shape());
}

SupportResult support(const BodySpec& body, const Eigen::Ref<const Vector>& y) {
  check_dim(body, y.size());
  return std::visit(Overloaded{
                        [&](const Ball& s) { return ball_support(y, s.p); },
                        [&](const Intersection& s) { return intersection_support(body, s, y); },
                        [&](const VkPolytope& s) { return box_l1_support(y, s.k); },
                        [&](const ScaledCube& s) {
                          SupportResult r = ball_support(y, Exponent::infinity());
                          r.point *= s.c;
                          r.value *= s.c;
                          return r;
                        },
                    },
                    body.shape());
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > LONG_MAX) return LONG_MAX;
  }
  return static_cast<long>(r);
}

std::vector<Vector> vk_vertices(int m, int k, long cap) {
  if (m < 1 || k < 1 || k > m) throw std::invalid_argument("vk_vertices: need 1 <= k <= m");
  const long combos = binomial(m, k);
  if (k >= 62 || combos > cap / (1L << k)) throw std::length_error("vk_vertices: vertex count exceeds enumeration cap");
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(combos << k));
  std::vector<int> support(static_cast<std::size_t>(k));
  std::iota(support.begin(), support.end(), 0);
  while (true) {
    for (long signs = 0; signs < (1L << k); ++signs) {
      Vector v = Vector::Zero(m);
      for (int j = 0; j < k; ++j) v(support[j]) = (signs >> j) & 1 ? -1.0 : 1.0;
      out.push_back(std::move(v));
    }
    int i = k - 1;
    while (i >= 0 && support[i] == m - k + i) --i;
    if (i < 0) break;
    ++support[i];
    for (int j = i + 1; j < k; ++j) support[j] = support[j - 1] + 1;
  }
  return out;
}

std::vector<Vector> cube_vertices(int m, long cap) { return vk_vertices(m, m, cap); }

std::vector<Vector> polytope_vertices(const BodySpec& body, long cap) {
  if (!body.is_polytope()) throw std::invalid_argument("polytope_vertices: body is not an enumerable polytope");
  const int m = body.m();
  return std::visit(Overloaded{
                        [&](const Ball& s) { return s.p.is_infinite() ? cube_vertices(m, cap) : vk_vertices(m, 1, cap); },
                        [&](const Intersection&) { return std::vector<Vector>{}; },
                        [&](const VkPolytope& s) { return vk_vertices(m, static_cast<int>(s.k), cap); },
                        [&](const ScaledCube& s) {
                          auto vs = cube_vertices(m, cap);
                          for (auto& v : vs) v *= s.c;
                          return vs;
                        },
                    },
                    body.shape());
}

double hull_gauge(std::span<const Vector> vertices, const Eigen::Ref<const Vector>& x) {
  if (vertices.empty()) throw std::invalid_argument("hull_gauge: no vertices");
  const Eigen::Index m = x.size();
  Eigen::MatrixXd A(m, static_cast<Eigen::Index>(vertices.size()));
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    if (vertices[j].size() != m) throw std::invalid_argument("hull_gauge: dimension mismatch");
    A.col(static_cast<Eigen::Index>(j)) = vertices[j];
  }
  const Vector c = Vector::Ones(A.cols());
  const lp::Result r = lp::minimize(A, x, c);
  if (r.status == lp::Status::Infeasible) return std::numeric_limits<double>::infinity();
  if (r.status != lp::Status::Optimal) throw std::runtime_error("hull_gauge: simplex did not converge");
  return r.objective;
}

double vk_dual_gauge(double k, const Eigen::Ref<const Vector>& x) {
  const auto idx = order_by_magnitude(x);
  double best = 0.0, prefix = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    prefix += std::abs(x(idx[j]));
    best = std::max(best, prefix / std::min(static_cast<double>(j + 1), k));
  }
  return best;
}

CertificateReport cert_interpolation(const Exponent& p1, const Exponent& p0, const Exponent& q, int m, long samples,
                                     std::uint64_t seed, double lambda_shift) {
  const double lambda = interpolation_lambda(p1, p0, q) + lambda_shift;
  CertificateReport rep;
  rep.name = "interpolation";
  rep.params = "p1=" + p1.to_string() + ";p0=" + p0.to_string() + ";q=" + q.to_string() + ";m=" + std::to_string(m);
  rep.tolerance = 1e-12;
  auto check = [&](const Vector& x) {
    const double lhs = lp_norm(x, q);
    const double rhs = std::pow(lp_norm(x, p1), 1.0 - lambda) * std::pow(lp_norm(x, p0), lambda);
    const double excess = (lhs - rhs) / rhs;
    ++rep.checks;
    if (excess > rep.tolerance) ++rep.violations;
    rep.max_deviation = std::max(rep.max_deviation, excess);
  };
  check(Vector::Unit(m, 0));
  check(Vector::Ones(m));
  for (long i = 0; i < samples; ++i) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(i));
    check(gaussian_vector(rng, m));
  }
  return rep;
}

CertificateReport cert_vkl(const Exponent& p0, const Exponent& p1, int k, int m, long cap) {
  const double scale = std::pow(static_cast<double>(k), -p0.inv());
  const double nu = nu_from_k(k, p1, p0);
  CertificateReport rep;
  rep.name = "vkl";
  rep.params = "p0=" + p0.to_string() + ";p1=" + p1.to_string() + ";k=" + std::to_string(k) + ";m=" + std::to_string(m);
  rep.tolerance = 1e-12;
  for (const Vector& v : vk_vertices(m, k, cap)) {
    const Vector x = scale * v;
    const double dev = std::max(std::abs(lp_norm(x, p0) - 1.0), std::abs(lp_norm(x, p1) / nu - 1.0));
    ++rep.checks;
    if (dev > rep.tolerance) ++rep.violations;
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

CertificateReport cert_cube(const Exponent& p0, const Exponent& p1, int k, int m, long cap, std::uint64_t seed) {
  const double nu = nu_from_k(k, p1, p0);
  const double c = nu * std::pow(static_cast<double>(m), -p1.inv());
  CertificateReport rep;
  rep.name = "cube";
  rep.params = "p0=" + p0.to_string() + ";p1=" + p1.to_string() + ";k=" + std::to_string(k) + ";m=" + std::to_string(m);
  rep.tolerance = 1e-12;
  auto check = [&](const Vector& v) {
    const Vector x = c * v;
    const double g0 = lp_norm(x, p0);
    const double g1 = lp_norm(x, p1) / nu;
    const double dev = std::max(std::abs(std::max(g0, g1) - 1.0), std::abs(g1 - 1.0));
    ++rep.checks;
    if (dev > rep.tolerance) ++rep.violations;
    rep.max_deviation = std::max(rep.max_deviation, dev);
  };
  if (m < 62 && (1L << m) <= cap) {
    for (const Vector& v : cube_vertices(m, cap)) check(v);
  } else {
    const long samples = std::min(cap, 100000L);
    for (long i = 0; i < samples; ++i) {
      auto rng = stream_rng(seed, static_cast<std::uint64_t>(i), 0xC0BE);
      Vector v(m);
      for (int j = 0; j < m; ++j) v(j) = (rng() & 1) ? -1.0 : 1.0;
      check(v);
    }
  }
  return rep;
}

}  // namespace nwidth
