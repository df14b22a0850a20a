#include "nwidth/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nwidth/bodies.hpp"
#include "nwidth/exponent.hpp"
#include "nwidth/format.hpp"
#include "nwidth/order.hpp"
#include "nwidth/suites.hpp"
#include "nwidth/widths.hpp"

namespace nwidth::cli {

namespace {

using json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << '\n';
}

// JSON numbers cannot hold inf; such values are written as strings.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_exact(v);
}

struct ProblemFlags {
  std::string p0, p1, q;
  int m = 0;
  std::vector<double> k, nu;

  void add(CLI::App* cmd, bool many) {
    cmd->add_option("--p0", p0, "outer exponent (decimal or inf)")->required();
    cmd->add_option("--p1", p1, "inner exponent, p1 < p0")->required();
    cmd->add_option("--q", q, "target exponent")->required();
    cmd->add_option("--m", m, "dimension")->required()->check(CLI::PositiveNumber);
    auto* ko = cmd->add_option("--k", k, many ? "V_k orders, one sweep each" : "V_k order");
    auto* no = cmd->add_option("--nu", nu, many ? "radii of the inner ball, one sweep each" : "radius of the inner ball");
    if (!many) {
      ko->expected(1);
      no->expected(1);
    }
    ko->excludes(no);
    no->excludes(ko);
  }

  std::vector<ProblemParams> params(long n) const {
    if (k.empty() && nu.empty()) throw std::invalid_argument("one of --k or --nu is required");
    const Exponent e0 = Exponent::parse(p0), e1 = Exponent::parse(p1), eq = Exponent::parse(q);
    std::vector<ProblemParams> out;
    for (double kv : k) out.push_back(ProblemParams::from_k(e0, e1, eq, m, n, kv));
    for (double v : nu) out.push_back(ProblemParams::from_nu(e0, e1, eq, m, n, v));
    return out;
  }
};

std::string trace_text(const OrderEstimate& est) {
  std::string s;
  for (const auto& step : est.trace) {
    if (!s.empty()) s += ' ';
    s += step.side == BoundSide::Upper ? "U:" : "L:";
    s += to_string(step.tag);
  }
  return s;
}

std::string regime_text(const OrderEstimate& est) {
  if (est.case_id == CaseId::NuClampLow || est.case_id == CaseId::NuClampHigh) return "";
  return to_string(est.regime);
}

int cmd_order(const ProblemFlags& f, long n, bool as_json, std::ostream& out) {
  const ProblemParams pp = f.params(n).front();
  const OrderEstimate est = order_intersection(pp);
  if (as_json) {
    json j;
    j["command"] = "order";
    j["p0"] = pp.p0.to_string();
    j["p1"] = pp.p1.to_string();
    j["q"] = pp.q.to_string();
    j["m"] = pp.m;
    j["n"] = pp.n;
    j["k"] = pp.k;
    j["nu"] = pp.nu_input;
    j["value"] = est.value;
    j["case"] = to_string(est.case_id);
    j["regime"] = regime_text(est);
    json steps = json::array();
    for (const auto& step : est.trace)
      steps.push_back({{"side", step.side == BoundSide::Upper ? "upper" : "lower"}, {"tag", to_string(step.tag)}});
    j["trace"] = steps;
    j["derivation"] = describe_derivation(est);
    j["status"] = "ok";
    out << j.dump(2) << '\n';
    return Ok;
  }
  csv_row(out, {"p0", "p1", "q", "m", "k", "nu", "n", "value", "case", "regime", "trace"});
  csv_row(out, {pp.p0.to_string(), pp.p1.to_string(), pp.q.to_string(), std::to_string(pp.m), format_exact(pp.k),
                format_exact(pp.nu_input), std::to_string(pp.n), format_exact(est.value), to_string(est.case_id),
                regime_text(est), trace_text(est)});
  return Ok;
}

struct SweepSeries {
  ProblemParams params;
  std::vector<std::pair<long, double>> points;
};

void write_svg(const std::string& path, const std::vector<SweepSeries>& series) {
  const double W = 720, H = 480, L = 70, R = 20, T = 30, B = 60;
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0, ymin = xmin, ymax = 0;
  for (const auto& s : series)
    for (const auto& [n, v] : s.points) {
      xmin = std::min(xmin, static_cast<double>(n));
      xmax = std::max(xmax, static_cast<double>(n));
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (!(xmax >= xmin) || ymin <= 0.0) throw std::invalid_argument("sweep: nothing positive to plot");
  const double lx0 = std::log(xmin), lx1 = std::log(std::max(xmax, xmin * 1.0001));
  double ly0 = std::log(ymin), ly1 = std::log(ymax);
  if (ly1 - ly0 < 1e-9) {
    ly0 -= 0.5;
    ly1 += 0.5;
  }
  auto px = [&](double x) { return L + (std::log(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log(y) - ly0) / (ly1 - ly0) * (H - T - B); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (W + L) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">n (log scale)</text>\n";
  svg << "<text x=\"15\" y=\"" << (H - B + T) / 2 << "\" transform=\"rotate(-90 15 " << (H - B + T) / 2
      << ")\" text-anchor=\"middle\">order value (log scale)</text>\n";
  svg << "<text x=\"" << L - 5 << "\" y=\"" << H - B << "\" text-anchor=\"end\">" << format_short(ymin) << "</text>\n";
  svg << "<text x=\"" << L - 5 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\">" << format_short(ymax) << "</text>\n";
  svg << "<text x=\"" << L << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">" << xmin << "</text>\n";
  svg << "<text x=\"" << W - R << "\" y=\"" << H - B + 15 << "\" text-anchor=\"middle\">" << xmax << "</text>\n";

  auto marker = [&](double x, const std::string& label, const char* color) {
    if (!(x >= xmin && x <= xmax)) return;
    svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << T << "\" x2=\"" << num(px(x)) << "\" y2=\"" << H - B
        << "\" stroke=\"" << color << "\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << num(px(x) + 3) << "\" y=\"" << T + 12 << "\" fill=\"" << color << "\">" << label << "</text>\n";
  };

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = colors[i % std::size(colors)];
    std::string pts;
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      const auto [n, v] = s.points[j];
      if (j > 0) pts += num(px(static_cast<double>(n))) + "," + num(py(s.points[j - 1].second)) + " ";
      pts += num(px(static_cast<double>(n))) + "," + num(py(v)) + " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    svg << "<text x=\"" << W - R - 5 << "\" y=\"" << T + 14 * (i + 1) << "\" text-anchor=\"end\" fill=\"" << color
        << "\">k=" << format_short(s.params.k) << "</text>\n";
    const ProblemParams& p = s.params;
    if (p.q.inv() <= 0.5) {
      marker(regime_boundary(p.k, p.m, p.q), "n*", color);
      marker(std::pow(static_cast<double>(p.m), 2.0 * p.q.inv()), "m^{2/q}", "#555555");
    }
  }
  svg << "</svg>\n";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("sweep: cannot write '" + path + "'");
  file << svg.str();
}

int cmd_sweep(const ProblemFlags& f, long n_min, std::optional<long> n_max_flag, const std::string& svg_path,
              std::ostream& out) {
  const long n_max = n_max_flag.value_or(f.m / 2);
  if (n_min < 0 || n_max < n_min) throw std::invalid_argument("sweep: need 0 <= n-min <= n-max");
  std::vector<SweepSeries> series;
  for (const ProblemParams& pp : f.params(0)) series.push_back({pp, {}});
  std::ostringstream rows;
  csv_row(rows, {"p0", "p1", "q", "m", "k", "n", "value", "case", "regime"});
  for (auto& s : series) {
    for (long n = n_min; n <= n_max; ++n) {
      ProblemParams pp = s.params;
      pp.n = n;
      const OrderEstimate est = order_intersection(pp);
      s.points.emplace_back(n, est.value);
      csv_row(rows, {pp.p0.to_string(), pp.p1.to_string(), pp.q.to_string(), std::to_string(pp.m), format_exact(pp.k),
                     std::to_string(n), format_exact(est.value), to_string(est.case_id), regime_text(est)});
    }
  }
  if (!svg_path.empty()) {
    for (auto& s : series) std::erase_if(s.points, [](const auto& p) { return p.first < 1 || !(p.second > 0.0); });
    write_svg(svg_path, series);
  }
  out << rows.str();
  return Ok;
}

int cmd_verify(const std::string& suite, long samples, std::uint64_t seed, double corrupt, std::ostream& out) {
  const auto reports = run_suite(suite, samples, seed, corrupt);
  bool ok = !reports.empty();
  csv_row(out, {"suite", "check", "params", "samples", "seed", "checks", "violations", "max_deviation", "tolerance",
                "status"});
  for (const auto& r : reports) {
    ok = ok && r.passed();
    csv_row(out, {suite, r.name, r.params, std::to_string(samples), std::to_string(seed), std::to_string(r.checks),
                  std::to_string(r.violations), format_exact(r.max_deviation), format_exact(r.tolerance),
                  r.passed() ? "ok" : "verification_failure"});
  }
  return ok ? Ok : VerificationFailure;
}

// Order estimate matching the body, used by --compare-order.
double order_for(const BodySpec& body, const Exponent& q, long n) {
  const int m = body.m();
  const Exponent inf = Exponent::infinity();
  if (const auto* b = std::get_if<Ball>(&body.shape())) return order_ball(b->p, q, m, n);
  if (const auto* s = std::get_if<Intersection>(&body.shape()))
    return order_intersection(ProblemParams::from_nu(s->p0, s->p1, q, m, n, s->nu)).value;
  if (const auto* v = std::get_if<VkPolytope>(&body.shape()))
    return order_intersection(ProblemParams::from_nu(inf, Exponent(1.0), q, m, n, v->k)).value;
  const auto& c = std::get<ScaledCube>(body.shape());
  return c.c * order_ball(inf, q, m, n);
}

struct EstimateFlags {
  std::string body, q;
  int m = 0;
  long n = 0;
  std::uint64_t seed = 0;
  SearchConfig cfg;
  bool compare = false, as_json = false, timing = false;
};

constexpr int kMaxSearchDimension = 64;

int cmd_estimate(EstimateFlags f, std::ostream& out) {
  if (f.m < 1 || f.m > kMaxSearchDimension) throw std::invalid_argument("estimate: m must lie in [1, 64]");
  if (f.n < 0 || f.n > f.m) throw std::invalid_argument("estimate: need 0 <= n <= m");
  const BodySpec body = BodySpec::parse(f.body, f.m);
  const Exponent q = Exponent::parse(f.q);
  f.cfg.seed = f.seed;
  const auto start = std::chrono::steady_clock::now();
  WidthBounds wb;
  try {
    wb = width_bounds(body, f.n, q, f.cfg);
  } catch (const std::length_error& e) {
    throw std::invalid_argument(std::string("estimate: ") + e.what());
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::optional<double> order_value;
  if (f.compare) order_value = order_for(body, q, f.n);
  const double ratio = order_value ? wb.upper / *order_value : 0.0;

  if (f.as_json) {
    json j;
    j["command"] = "estimate";
    j["body"] = body.to_string();
    j["m"] = f.m;
    j["n"] = f.n;
    j["q"] = q.to_string();
    j["upper"] = json_number(wb.upper);
    j["upper_heuristic"] = wb.upper_heuristic;
    j["lower"] = json_number(wb.lower);
    j["lower_method"] = to_string(wb.lower_method);
    j["order_value"] = order_value ? json_number(*order_value) : json();
    j["ratio"] = order_value ? json_number(ratio) : json();
    j["seed"] = f.seed;
    j["wall_ms"] = f.timing ? json(wall_ms) : json();
    j["status"] = "ok";
    out << j.dump(2) << '\n';
    return Ok;
  }
  csv_row(out, {"body", "m", "n", "q", "upper", "lower", "lower_method", "order_value", "ratio", "seed", "wall_ms"});
  csv_row(out, {body.to_string(), std::to_string(f.m), std::to_string(f.n), q.to_string(), format_exact(wb.upper),
                format_exact(wb.lower), to_string(wb.lower_method), order_value ? format_exact(*order_value) : "",
                order_value ? format_exact(ratio) : "", std::to_string(f.seed), f.timing ? format_exact(wall_ms) : ""});
  return Ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kolmogorov widths of intersections of l_p balls"};
  app.name("nwidth");
  app.require_subcommand(1);

  ProblemFlags order_flags, sweep_flags;
  long order_n = 0;
  bool order_json = false;
  auto* order = app.add_subcommand("order", "order estimate for B_p0 ∩ nu B_p1 in l_q");
  order_flags.add(order, false);
  order->add_option("--n", order_n, "width index, 0 <= n <= m/2")->required();
  order->add_flag("--json", order_json, "emit JSON instead of CSV");

  long sweep_n_min = 1;
  std::optional<long> sweep_n_max;
  std::string sweep_svg;
  auto* sweep = app.add_subcommand("sweep", "order estimate over a range of n");
  sweep_flags.add(sweep, true);
  sweep->add_option("--n-min", sweep_n_min, "first n (default 1)");
  sweep->add_option("--n-max", sweep_n_max, "last n (default m/2)");
  sweep->add_option("--svg", sweep_svg, "also write a log-log step plot to this path");

  std::string suite;
  long samples = 1000;
  std::uint64_t verify_seed = 0;
  double corrupt = 0.0;
  auto* verify = app.add_subcommand("verify", "run a certificate suite");
  verify->add_option("--suite", suite, "inclusions|interpolation|boundaries|reductions|duality")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--samples", samples, "random samples per check family")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "seed");
  verify->add_option("--corrupt-lambda", corrupt)->group("");

  EstimateFlags est;
  auto* estimate = app.add_subcommand("estimate", "numeric upper and lower bounds for d_n(body, l_q)");
  estimate->add_option("--body", est.body, "ball:P | intersection:P0,P1,NU | vk:K | cube:C")->required();
  estimate->add_option("--m", est.m, "dimension (<= 64)")->required();
  estimate->add_option("--n", est.n, "width index")->required();
  estimate->add_option("--q", est.q, "target exponent")->required();
  estimate->add_option("--seed", est.seed, "seed");
  estimate->add_option("--restarts", est.cfg.restarts, "random restarts per level")->check(CLI::NonNegativeNumber);
  estimate->add_option("--ascent-iters", est.cfg.ascent_iters, "ascent iterations per start")->check(CLI::PositiveNumber);
  estimate->add_option("--refine-rounds", est.cfg.refine_rounds, "principal-direction refits per level")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--vertex-cap", est.cfg.vertex_cap, "largest vertex set to enumerate")->check(CLI::PositiveNumber);
  estimate->add_option("--threads", est.cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  estimate->add_flag("--compare-order", est.compare, "append the order estimate and upper/order");
  estimate->add_flag("--json", est.as_json, "emit JSON instead of CSV");
  estimate->add_flag("--timing", est.timing, "fill the wall_ms column (output is then not reproducible)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : InvalidArgs;
  }

  try {
    if (order->parsed()) return cmd_order(order_flags, order_n, order_json, out);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_n_min, sweep_n_max, sweep_svg, out);
    if (verify->parsed()) return cmd_verify(suite, samples, verify_seed, corrupt, out);
    if (estimate->parsed()) return cmd_estimate(est, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return InvalidArgs;
  }
  return InvalidArgs;
}

}  // namespace nwidth::cli
