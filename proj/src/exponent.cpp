#include "nwidth/exponent.hpp"

#include "nwidth/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nwidth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Exponent::Exponent(double p) : value_(p), inv_(0.0) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("invalid exponent: p must lie in [1, inf]");
  inv_ = std::isinf(p) ? 0.0 : 1.0 / p;
}

Exponent Exponent::infinity() { return Exponent(kInf, 0.0); }

Exponent Exponent::from_inverse(double inv) {
  if (std::isnan(inv) || inv < 0.0 || inv > 1.0)
    throw std::invalid_argument("invalid exponent: 1/p must lie in [0, 1]");
  return Exponent(inv == 0.0 ? kInf : 1.0 / inv, inv);
}

Exponent Exponent::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "inf" || s == "infinity") return infinity();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid exponent: '" + std::string(text) + "'");
  }
  if (used != s.size()) throw std::invalid_argument("invalid exponent: '" + std::string(text) + "'");
  return Exponent(p);
}

std::string Exponent::to_string() const { return format_short(value_); }

double reciprocal(const Exponent& p) { return p.inv(); }

double interpolation_lambda(const Exponent& p1, const Exponent& p0, const Exponent& q) {
  require(p1 < p0, "interpolation_lambda: need p1 < p0");
  require(p1 <= q && q <= p0, "interpolation_lambda: q outside [p1, p0]");
  return (p1.inv() - q.inv()) / (p1.inv() - p0.inv());
}

double lambda_pq(const Exponent& p, const Exponent& q) {
  require(q.inv() < 0.5 && !q.is_infinite(), "lambda_pq: need 2 < q < inf");
  require(p <= q, "lambda_pq: need p <= q");
  return std::min(1.0, (p.inv() - q.inv()) / (0.5 - q.inv()));
}

double k_from_nu(double nu, const Exponent& p1, const Exponent& p0, int m) {
  require(nu > 0.0 && std::isfinite(nu), "k_from_nu: nu must be positive");
  require(p1 < p0, "k_from_nu: need p1 < p0");
  require(m >= 1, "k_from_nu: m must be positive");
  if (nu <= 1.0) return 1.0;
  if (nu >= nu_from_k(m, p1, p0)) return static_cast<double>(m);
  const double k = std::pow(nu, 1.0 / (p1.inv() - p0.inv()));
  return std::clamp(k, 1.0, static_cast<double>(m));
}

double nu_from_k(double k, const Exponent& p1, const Exponent& p0) {
  return std::pow(k, p1.inv() - p0.inv());
}

double regime_boundary(double k, int m, const Exponent& q) {
  require(q.inv() <= 0.5, "regime_boundary: need q >= 2");
  require(k >= 1.0 && k <= m, "regime_boundary: need 1 <= k <= m");
  const double s = 2.0 * q.inv();
  return std::pow(k, 1.0 - s) * std::pow(static_cast<double>(m), s);
}

long effective_k(long n, int m, const Exponent& q, double a) {
  require(q.inv() < 0.5 && !q.is_infinite(), "effective_k: need 2 < q < inf");
  require(n >= 1, "effective_k: need n >= 1");
  require(a > 0.0, "effective_k: a must be positive");
  const double base = std::sqrt(a) * std::pow(static_cast<double>(n), -0.5) *
                      std::pow(static_cast<double>(m), q.inv());
  const double raw = std::pow(base, 1.0 / (q.inv() - 0.5));
  // Values that are integral up to rounding must not ceil to the next integer.
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(raw));
}

ProblemParams ProblemParams::from_k(Exponent p0, Exponent p1, Exponent q, int m, long n, double k) {
  require(p1 < p0, "problem: need p1 < p0");
  require(m >= 1, "problem: m must be positive");
  require(n >= 0, "problem: n must be non-negative");
  require(k >= 1.0 && k <= m, "problem: need 1 <= k <= m");
  ProblemParams pp;
  pp.p0 = p0;
  pp.p1 = p1;
  pp.q = q;
  pp.m = m;
  pp.n = n;
  pp.k = k;
  pp.nu = nu_from_k(k, p1, p0);
  pp.nu_input = pp.nu;
  return pp;
}

ProblemParams ProblemParams::from_nu(Exponent p0, Exponent p1, Exponent q, int m, long n, double nu) {
  double k = k_from_nu(nu, p1, p0, m);
  Clamp clamp = Clamp::None;
  if (nu <= 1.0) {
    clamp = Clamp::Low;
    k = 1.0;
  } else if (nu >= nu_from_k(m, p1, p0)) {
    clamp = Clamp::High;
    k = m;
  }
  ProblemParams pp = from_k(p0, p1, q, m, n, k);
  pp.nu_input = nu;
  pp.clamp = clamp;
  return pp;
}

}  // namespace nwidth
