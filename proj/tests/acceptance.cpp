// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nwidth/bodies.hpp"
#include "nwidth/cli.hpp"
#include "nwidth/order.hpp"
#include "nwidth/random.hpp"
#include "nwidth/suites.hpp"
#include "nwidth/widths.hpp"

using namespace nwidth;

namespace {

const Exponent inf = Exponent::infinity();

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string cli_out(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

std::vector<std::string> last_row(const std::string& csv) {
  std::string line, last;
  std::istringstream in(csv);
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char c : last) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else cur += c;
  }
  cells.push_back(cur);
  return cells;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome exact_ball_widths() {
  Outcome o;
  int cases = 0;
  double worst = 0.0;
  for (const std::string p : {"1", "2", "inf"})
    for (const std::string q : {"1", "1.5", "2"}) {
      const Exponent pe = Exponent::parse(p), qe = Exponent::parse(q);
      if (!(qe <= pe)) continue;
      for (int m = 2; m <= 5; ++m)
        for (int n = 1; n < m; ++n) {
          int code = 0;
          const auto row = last_row(cli_out(
              {"estimate", "--body", "ball:" + p, "--m", std::to_string(m), "--n", std::to_string(n), "--q", q}, &code));
          const double exact = std::pow(static_cast<double>(m - n), qe.inv() - pe.inv());
          const double upper = code == 0 ? std::stod(row.at(4)) : NAN;
          ++cases;
          worst = std::max(worst, upper / exact - 1.0);
          if (!(upper >= exact - 1e-9 && upper <= 1.02 * exact)) {
            o.ok = false;
            o.detail += " miss(p=" + p + ",q=" + q + ",m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
          }
        }
    }
  o.detail = std::to_string(cases) + " tuples, worst upper/exact-1 = " + fmt("%.3g", worst) + o.detail;
  return o;
}

Outcome pca_closed_form() {
  Outcome o;
  double worst = 0.0;
  int cases = 0;
  for (int m = 1; m <= 8; ++m)
    for (int k = 1; k <= m; ++k)
      for (int n = 0; n <= m; ++n) {
        const double v = pca_lower_l2_explicit(m, k, n);
        const double closed = std::sqrt(k * (1.0 - static_cast<double>(n) / m));
        worst = std::max(worst, std::abs(v - closed));
        ++cases;
      }
  const double spot = pca_lower_l2_explicit(6, 3, 2);
  o.ok = worst <= 1e-9 && std::abs(spot - std::sqrt(2.0)) <= 1e-9;
  o.detail = std::to_string(cases) + " (m,k,n), max |explicit-closed| = " + fmt("%.3g", worst) +
             ", (6,3,2) = " + fmt("%.12f", spot);
  return o;
}

Outcome certificates() {
  Outcome o;
  const std::vector<Exponent> grid{Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(3.0), inf};
  long checks = 0, violations = 0, triples = 0;
  double worst = 0.0;
  for (const auto& p0 : grid)
    for (const auto& p1 : grid) {
      if (!(p1 < p0)) continue;
      for (int m = 1; m <= 6; ++m)
        for (int k = 1; k <= m; ++k)
          for (const auto& r : {cert_vkl(p0, p1, k, m), cert_cube(p0, p1, k, m)}) {
            checks += r.checks;
            violations += r.violations;
            worst = std::max(worst, r.max_deviation);
          }
      for (const auto& q : grid) {
        if (!(p1 <= q && q <= p0)) continue;
        const auto r = cert_interpolation(p1, p0, q, 8, 10000, 7);
        ++triples;
        checks += r.checks;
        violations += r.violations;
        worst = std::max(worst, r.max_deviation);
      }
    }
  o.ok = violations == 0 && worst <= 1e-12;
  o.detail = std::to_string(checks) + " checks incl. " + std::to_string(triples) + " interpolation triples x 10^4, " +
             std::to_string(violations) + " violations, max deviation " + fmt("%.3g", worst);
  return o;
}

Outcome structural() {
  Outcome o;
  long checks = 0;
  long boundary_points = 0;
  for (const std::string suite : {"boundaries", "reductions"})
    for (const auto& r : run_suite(suite, 1, 0)) {
      checks += r.checks;
      if (r.name == "regime_boundary") boundary_points = r.checks;
      if (!r.passed()) {
        o.ok = false;
        o.detail += " " + r.name + " failed (max " + fmt("%.3g", r.max_deviation) + ")";
      }
    }
  o.ok = o.ok && boundary_points == 200;
  o.detail = std::to_string(boundary_points) + " boundary points, " + std::to_string(checks) + " checks" + o.detail;
  return o;
}

Outcome gauge_vs_hull() {
  Outcome o;
  double worst = 0.0;
  long points = 0;
  for (int m = 1; m <= 6; ++m)
    for (int k = 1; k <= m; ++k) {
      const auto verts = vk_vertices(m, k);
      const BodySpec body = BodySpec::vk(m, k);
      for (int i = 0; i < 1000; ++i) {
        auto rng = stream_rng(2024, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(m * 16 + k));
        const Vector x = gaussian_vector(rng, m);
        const double g = gauge(body, x);
        worst = std::max(worst, std::abs(g - hull_gauge(verts, x)) / std::max(1.0, g));
        ++points;
      }
    }
  o.ok = worst <= 1e-9;
  o.detail = std::to_string(points) + " points, max relative mismatch " + fmt("%.3g", worst);
  return o;
}

std::vector<std::vector<std::string>> consistency_args() {
  std::vector<std::vector<std::string>> out;
  for (int m : {16, 32, 64}) {
    char nu[40];
    std::snprintf(nu, sizeof nu, "%.17g", std::sqrt(static_cast<double>(m)));
    for (int n : {m / 8, m / 4, m / 2})
      out.push_back({"estimate", "--body", std::string("intersection:inf,1,") + nu, "--m", std::to_string(m), "--n",
                     std::to_string(n), "--q", "2", "--compare-order", "--seed", "1"});
  }
  return out;
}

Outcome numeric_vs_order() {
  Outcome o;
  std::printf("  %4s %4s %12s %12s %12s %10s\n", "m", "n", "lower", "upper", "order", "upper/ord");
  int rows = 0;
  for (const auto& args : consistency_args()) {
    int code = 0;
    const auto row = last_row(cli_out(args, &code));
    if (code != 0) {
      o.ok = false;
      continue;
    }
    const double upper = std::stod(row[4]), lower = std::stod(row[5]), order = std::stod(row[7]);
    std::printf("  %4s %4s %12.6f %12.6f %12.6f %10.4f\n", row[1].c_str(), row[2].c_str(), lower, upper, order,
                upper / order);
    if (!(lower < upper)) o.ok = false;
    ++rows;
  }
  o.detail = std::to_string(rows) + " rows, lower < upper " + (o.ok ? "in every row" : "FAILED");
  return o;
}

std::string full_csv() {
  std::string all;
  for (const auto& suite : suite_names()) all += cli_out({"verify", "--suite", suite, "--samples", "500", "--seed", "7"});
  for (const auto& args : consistency_args()) all += cli_out(args);
  all += cli_out({"estimate", "--body", "ball:2", "--m", "5", "--n", "2", "--q", "1.5", "--seed", "3"});
  all += cli_out({"sweep", "--p0", "3", "--p1", "1", "--q", "6", "--m", "256", "--k", "4", "16"});
  return all;
}

Outcome determinism() {
  const std::string a = full_csv(), b = full_csv();
  Outcome o;
  o.ok = !a.empty() && a == b;
  o.detail = std::to_string(a.size()) + " bytes, " + (o.ok ? "identical" : "DIFFERENT");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "exact ball widths reproduced by estimate", 60, exact_ball_widths},
      {2, "orbit-averaged PCA bound equals sqrt(k(1-n/m))", 10, pca_closed_form},
      {3, "inclusion and interpolation certificates", 0, certificates},
      {4, "order estimate structural suite", 0, structural},
      {5, "V_k gauge formula vs hull membership", 0, gauge_vs_hull},
      {6, "numeric vs order consistency (soft ratio, strict lower < upper)", 300, numeric_vs_order},
      {7, "byte-identical CSV across runs", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.ok = false;
      o.detail += " (over time limit)";
    }
    std::printf("%s criterion %d: %s; %s; %.2fs\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
