#pragma once

#include <string>
#include <string_view>

namespace nwidth {

// An exponent p in [1, inf]. All arithmetic downstream works on inv = 1/p,
// which lives in [0, 1] and is 0 for p = inf.
class Exponent {
 public:
  // Throws std::invalid_argument for p < 1 or NaN. +inf is accepted.
  explicit Exponent(double p);

  static Exponent infinity();
  static Exponent from_inverse(double inv);
  // Accepts decimals and the token "inf" (case-insensitive).
  static Exponent parse(std::string_view text);

  double value() const { return value_; }
  double inv() const { return inv_; }
  bool is_infinite() const { return inv_ == 0.0; }

  // Hoelder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const { return from_inverse(1.0 - inv_); }

  std::string to_string() const;

  // Ordering by value; p <= q iff 1/p >= 1/q.
  friend bool operator==(const Exponent& a, const Exponent& b) { return a.inv_ == b.inv_; }
  friend bool operator<(const Exponent& a, const Exponent& b) { return a.inv_ > b.inv_; }
  friend bool operator<=(const Exponent& a, const Exponent& b) { return a.inv_ >= b.inv_; }
  friend bool operator>(const Exponent& a, const Exponent& b) { return b < a; }
  friend bool operator>=(const Exponent& a, const Exponent& b) { return b <= a; }

 private:
  Exponent(double value, double inv) : value_(value), inv_(inv) {}
  double value_;
  double inv_;
};

double reciprocal(const Exponent& p);

// lambda in [0, 1] with 1/q = (1 - lambda)/p1 + lambda/p0. Requires p1 <= q <= p0, p1 < p0.
double interpolation_lambda(const Exponent& p1, const Exponent& p0, const Exponent& q);

// min{1, (1/p - 1/q)/(1/2 - 1/q)} for p <= q and 2 < q < inf.
double lambda_pq(const Exponent& p, const Exponent& q);

// nu^{1/(1/p1 - 1/p0)} clamped into [1, m]. k may be non-integer.
double k_from_nu(double nu, const Exponent& p1, const Exponent& p0, int m);

// nu = k^{1/p1 - 1/p0}.
double nu_from_k(double k, const Exponent& p1, const Exponent& p0);

// n* = k^{1 - 2/q} m^{2/q}, the point where the piecewise estimates switch branch.
double regime_boundary(double k, int m, const Exponent& q);

// ceil((a^{1/2} n^{-1/2} m^{1/q})^{1/(1/q - 1/2)}); a stands in for the unknown a(q).
long effective_k(long n, int m, const Exponent& q, double a = 1.0);

// One width question. nu is always consistent with k; nu_input keeps the raw
// radius when the problem was posed through nu and got clamped.
struct ProblemParams {
  enum class Clamp { None, Low, High };

  Exponent p0{Exponent::infinity()};
  Exponent p1{1.0};
  Exponent q{2.0};
  int m = 1;
  long n = 0;
  double k = 1.0;
  double nu = 1.0;
  double nu_input = 1.0;
  Clamp clamp = Clamp::None;

  static ProblemParams from_k(Exponent p0, Exponent p1, Exponent q, int m, long n, double k);
  // nu <= 1 clamps low (body = nu B_p1), nu >= m^{1/p1-1/p0} clamps high (body = B_p0).
  static ProblemParams from_nu(Exponent p0, Exponent p1, Exponent q, int m, long n, double nu);
};

}  // namespace nwidth
