#include "nwidth/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nwidth/order.hpp"
#include "nwidth/random.hpp"

namespace nwidth {

namespace {

const std::vector<Exponent>& certificate_grid() {
  static const std::vector<Exponent> grid{Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(3.0),
                                          Exponent::infinity()};
  return grid;
}

struct Tally {
  CertificateReport report;

  Tally(std::string name, std::string params, double tol) {
    report.name = std::move(name);
    report.params = std::move(params);
    report.tolerance = tol;
  }
  void check(double deviation) {
    ++report.checks;
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    report.max_deviation = std::max(report.max_deviation, deviation);
    if (deviation > report.tolerance) ++report.violations;
  }
  void absorb(const CertificateReport& r) {
    report.checks += r.checks;
    report.violations += r.violations;
    report.max_deviation = std::max(report.max_deviation, r.max_deviation);
    report.tolerance = std::max(report.tolerance, r.tolerance);
  }
};

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Amount by which a <= b fails, relative to b.
double excess(double a, double b) { return std::max(0.0, (a - b) / std::max(std::abs(b), 1e-300)); }

std::vector<CertificateReport> inclusions() {
  Tally vkl("cert_vkl", "p0,p1 in {1;1.5;2;3;inf} p1<p0; 1<=k<=m<=6", 1e-12);
  Tally cube("cert_cube", "p0,p1 in {1;1.5;2;3;inf} p1<p0; 1<=k<=m<=6", 1e-12);
  for (const auto& p0 : certificate_grid())
    for (const auto& p1 : certificate_grid()) {
      if (!(p1 < p0)) continue;
      for (int m = 1; m <= 6; ++m)
        for (int k = 1; k <= m; ++k) {
          vkl.absorb(cert_vkl(p0, p1, k, m));
          cube.absorb(cert_cube(p0, p1, k, m));
        }
    }
  vkl.report.tolerance = cube.report.tolerance = 1e-12;
  return {vkl.report, cube.report};
}

std::vector<CertificateReport> interpolation(long samples, std::uint64_t seed, double shift) {
  std::vector<CertificateReport> out;
  const auto& grid = certificate_grid();
  for (const auto& p1 : grid)
    for (const auto& p0 : grid) {
      if (!(p1 < p0)) continue;
      for (const auto& q : grid)
        if (p1 <= q && q <= p0) out.push_back(cert_interpolation(p1, p0, q, 8, samples, seed, shift));
    }
  return out;
}

bool is_main_case(CaseId id) {
  return id == CaseId::Case1 || id == CaseId::Case2 || id == CaseId::Case3 || id == CaseId::Case4;
}

// 200 parameter points spread evenly over cases 1-4.
std::vector<ProblemParams> boundary_grid() {
  const std::vector<double> exps{1, 1.25, 1.5, 1.75, 2, 2.5, 3, 4, 6, 8, std::numeric_limits<double>::infinity()};
  // For q <= 2 the tail regime starts beyond n = m/2, so there is no boundary to check.
  const std::vector<double> qs{2.5, 3, 4, 5, 6, 8, 12, 16};
  std::vector<std::vector<ProblemParams>> by_case(4);
  for (int m : {64, 1024})
    for (double p1v : exps)
      for (double p0v : exps) {
        if (!(p1v < p0v)) continue;
        for (double qv : qs)
          for (double k : {2.0, 3.5, std::sqrt(static_cast<double>(m)), m / 3.0}) {
            const Exponent p0(p0v), p1(p1v), q(qv);
            ProblemParams pp = ProblemParams::from_k(p0, p1, q, m, 0, k);
            const CaseId id = classify(pp);
            if (is_main_case(id)) by_case[static_cast<int>(id) - static_cast<int>(CaseId::Case1)].push_back(pp);
          }
      }
  std::vector<ProblemParams> out;
  for (const auto& pts : by_case) {
    const std::size_t take = std::min<std::size_t>(50, pts.size());
    for (std::size_t i = 0; i < take; ++i) out.push_back(pts[i * pts.size() / take]);
  }
  return out;
}

std::vector<CertificateReport> boundaries() {
  Tally at_nstar("regime_boundary", "cases 1-4; head vs tail formula at n*", 1e-12);
  Tally at_flat("flat_end", "cases 1-2; flat vs interpolated formula at m^{2/q}", 1e-12);
  for (const ProblemParams& pp : boundary_grid()) {
    const CaseId id = classify(pp);
    const double nstar = regime_boundary(pp.k, pp.m, pp.q);
    const bool interp = id == CaseId::Case1 || id == CaseId::Case2;
    const Regime head = interp ? Regime::Interpolated : Regime::Flat;
    at_nstar.check(relative_gap(case_formula(id, head, pp, nstar), case_formula(id, Regime::Tail, pp, nstar)));
    if (interp) {
      const double nflat = std::pow(static_cast<double>(pp.m), 2.0 * pp.q.inv());
      at_flat.check(relative_gap(case_formula(id, Regime::Flat, pp, nflat),
                                 case_formula(id, Regime::Interpolated, pp, nflat)));
    }
  }
  return {at_nstar.report, at_flat.report};
}

// Ball order with the exact-width constant dropped: m^{1/q-1/p} when q <= p.
double ball_order_free(const Exponent& p, const Exponent& q, int m, long n) {
  if (q <= p) return std::pow(static_cast<double>(m), q.inv() - p.inv());
  return order_ball(p, q, m, n);
}

std::vector<CertificateReport> reductions() {
  Tally exact("reduction_exact", "k=1 vs ball p1, k=m vs ball p0 where p < q", 0.0);
  Tally endpoint("reduction_exact_width", "k=1 / k=m vs exact ball width where q <= p; factor 2^{|1/q-1/p|}", 1e-12);
  Tally clamp("reduction_clamp", "nu beyond [1, m^{1/p1-1/p0}] vs ball estimates", 0.0);
  Tally sandwich("sandwich", "ball p1 <= intersection <= ball p0", 1e-12);
  Tally mono_n("monotone_n", "nonincreasing in n", 1e-12);
  Tally mono_k("monotone_k", "nondecreasing in k", 1e-12);

  const std::vector<double> exps{1, 1.5, 2, 3, 4, std::numeric_limits<double>::infinity()};
  const std::vector<double> qs{1, 1.5, 2, 3, 4, 8};
  for (int m : {16, 64, 256}) {
    const double md = m;
    const std::vector<double> ks{1, 1.5, 2, 4, std::sqrt(md), md / 4, md / 2, md};
    for (double p1v : exps)
      for (double p0v : exps) {
        if (!(p1v < p0v)) continue;
        for (double qv : qs) {
          const Exponent p0(p0v), p1(p1v), q(qv);
          for (long n = 0; 2 * n <= m; ++n) {
            auto value = [&](double k) { return order_intersection(ProblemParams::from_k(p0, p1, q, m, n, k)).value; };
            for (const auto& [k, ball] : {std::pair{1.0, p1}, std::pair{md, p0}}) {
              const double v = value(k);
              const double ref = order_ball(ball, q, m, n);
              if (ball < q) {
                exact.check(relative_gap(v, ref));
              } else {
                const double factor = std::pow(2.0, std::abs(q.inv() - ball.inv()));
                endpoint.check(std::max(excess(v, ref * factor), excess(ref, v * factor)));
              }
            }
            const double high = std::pow(md, p1.inv() - p0.inv()) * 1.5;
            clamp.check(relative_gap(order_intersection(ProblemParams::from_nu(p0, p1, q, m, n, high)).value,
                                     order_ball(p0, q, m, n)));
            clamp.check(relative_gap(order_intersection(ProblemParams::from_nu(p0, p1, q, m, n, 0.5)).value,
                                     0.5 * order_ball(p1, q, m, n)));
            double prev_k = 0.0;
            for (double k : ks) {
              const double v = value(k);
              sandwich.check(excess(ball_order_free(p1, q, m, n), v));
              sandwich.check(excess(v, ball_order_free(p0, q, m, n)));
              mono_k.check(excess(prev_k, v));
              prev_k = v;
              if (n > 0) mono_n.check(excess(v, order_intersection(ProblemParams::from_k(p0, p1, q, m, n - 1, k)).value));
            }
          }
        }
      }
  }
  return {exact.report, endpoint.report, clamp.report, sandwich.report, mono_n.report, mono_k.report};
}

std::vector<CertificateReport> duality(long samples, std::uint64_t seed) {
  const int m = 5;
  const Exponent inf = Exponent::infinity();
  const std::vector<BodySpec> bodies{
      BodySpec::ball(m, Exponent(1.0)),
      BodySpec::ball(m, Exponent(1.5)),
      BodySpec::ball(m, Exponent(2.0)),
      BodySpec::ball(m, Exponent(3.0)),
      BodySpec::ball(m, inf),
      BodySpec::intersection(m, inf, Exponent(1.0), 2.0),
      BodySpec::intersection(m, inf, Exponent(2.0), 1.5),
      BodySpec::intersection(m, Exponent(3.0), Exponent(1.5), 1.3),
      BodySpec::vk(m, 1),
      BodySpec::vk(m, 2),
      BodySpec::vk(m, 3),
      BodySpec::vk(m, 5),
      BodySpec::cube(m, 0.7),
  };
  std::vector<CertificateReport> out;
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const BodySpec& body = bodies[b];
    Tally t("duality", body.to_string() + "; m=5", 1e-9);
    const auto* vk = std::get_if<VkPolytope>(&body.shape());
    for (long i = 0; i < samples; ++i) {
      auto rng = stream_rng(seed, static_cast<std::uint64_t>(i), 0xD0A1 + b);
      const Vector y = gaussian_vector(rng, m);
      const Vector x = gaussian_vector(rng, m);
      const SupportResult s = support(body, y);
      const double g = gauge(body, s.point);
      // Support point lies on the boundary (inside, for numeric support) and attains the value.
      t.check(s.approximate ? std::max(0.0, g - 1.0) : std::abs(g - 1.0));
      t.check(std::abs(s.point.dot(y) - s.value) / std::max(1.0, std::abs(s.value)));
      // <x, y> <= gauge(x) h(y) for every x.
      if (!s.approximate) t.check(std::max(0.0, x.dot(y) - gauge(body, x) * s.value) / std::max(1.0, std::abs(s.value)));
      // The gauge of V_k is attained on the sign probes of x.
      if (vk) t.check(relative_gap(vk_dual_gauge(vk->k, x), gauge(body, x)));
    }
    out.push_back(t.report);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"inclusions", "interpolation", "boundaries", "reductions", "duality"};
  return names;
}

std::vector<CertificateReport> run_suite(const std::string& suite, long samples, std::uint64_t seed,
                                         double lambda_shift) {
  if (samples < 1) throw std::invalid_argument("verify: samples must be positive");
  if (suite == "inclusions") return inclusions();
  if (suite == "interpolation") return interpolation(samples, seed, lambda_shift);
  if (suite == "boundaries") return boundaries();
  if (suite == "reductions") return reductions();
  if (suite == "duality") return duality(samples, seed);
  throw std::invalid_argument("verify: unknown suite '" + suite + "'");
}

}  // namespace nwidth
