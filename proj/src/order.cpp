#include "nwidth/order.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nwidth {

namespace {

using enum TraceTag;

// n^{-1/2} m^{1/q}, clipped to 1 (n = 0 counts as the unclipped limit).
double clipped_ratio(double n, int m, const Exponent& q) {
  if (n <= 0.0) return 1.0;
  return std::min(1.0, std::pow(n, -0.5) * std::pow(static_cast<double>(m), q.inv()));
}

// m^{2/q}: end of the flat regime. Shared by every ball and intersection formula so that
// the endpoint reductions compare identical floating-point quantities.
double flat_end(int m, const Exponent& q) { return std::pow(static_cast<double>(m), 2.0 * q.inv()); }

std::vector<TraceStep> upper_lower(std::initializer_list<TraceTag> upper, std::initializer_list<TraceTag> lower) {
  std::vector<TraceStep> out;
  for (auto t : upper) out.push_back({BoundSide::Upper, t});
  for (auto t : lower) out.push_back({BoundSide::Lower, t});
  return out;
}

std::vector<TraceStep> trace_for(CaseId id, Regime regime) {
  const bool tail = regime == Regime::Tail;
  switch (id) {
    case CaseId::TrivialSmallQ:
    case CaseId::TrivialP0le2:
      return upper_lower({ThmA}, {ThmA});
    case CaseId::Case1:
      if (tail) return upper_lower({Incl4, ThmA}, {Incl5, ThmC, Kq2, NormTransfer});
      return upper_lower({ThmA}, {Incl5, ThmC});
    case CaseId::Case2:
      if (tail) return upper_lower({ThmA}, {Incl5, ThmC, Incl6, ThmB});
      return upper_lower({ThmA}, {Incl5, ThmC});
    case CaseId::Case3:
      if (tail) return upper_lower({ThmA}, {Incl5, ThmC, Incl6, ThmB});
      return upper_lower({Incl3, ThmB}, {Incl5, ThmC});
    case CaseId::Case4:
      if (tail) return upper_lower({Incl4, ThmA}, {Incl5, ThmC, Kq2, NormTransfer});
      return upper_lower({Incl3, ThmB}, {Incl5, ThmC});
    case CaseId::Case5:
      return upper_lower({Incl3, ThmB}, {Incl5, ThmD});
    case CaseId::Case6:
      return upper_lower({ThmB}, {Incl6, ThmB});
    case CaseId::NuClampLow:
    case CaseId::NuClampHigh:
      break;
  }
  return {};
}

void validate(const ProblemParams& p) {
  if (!(p.p1 < p.p0)) throw std::invalid_argument("order: need p1 < p0");
  if (p.m < 1) throw std::invalid_argument("order: m must be positive");
  if (p.n < 0 || 2 * p.n > p.m) throw std::invalid_argument("order: need 0 <= n <= m/2");
  if (!(p.k >= 1.0 && p.k <= p.m)) throw std::invalid_argument("order: need 1 <= k <= m");
  if (p.q.is_infinite())
    throw NotCovered("parameters not covered by the intersection estimate: q = inf with q > p1");
}

Regime select_regime(CaseId id, const ProblemParams& p) {
  const double n = static_cast<double>(p.n);
  switch (id) {
    case CaseId::TrivialP0le2:
      return n <= flat_end(p.m, p.q) ? Regime::Flat : Regime::Interpolated;
    case CaseId::Case1:
    case CaseId::Case2:
      if (n <= flat_end(p.m, p.q)) return Regime::Flat;
      return n <= regime_boundary(p.k, p.m, p.q) ? Regime::Interpolated : Regime::Tail;
    case CaseId::Case3:
    case CaseId::Case4:
      return n <= regime_boundary(p.k, p.m, p.q) ? Regime::Flat : Regime::Tail;
    default:
      return Regime::Flat;
  }
}

}  // namespace

const char* to_string(CaseId id) {
  switch (id) {
    case CaseId::TrivialSmallQ: return "TrivialSmallQ";
    case CaseId::TrivialP0le2: return "TrivialP0le2";
    case CaseId::Case1: return "Case1";
    case CaseId::Case2: return "Case2";
    case CaseId::Case3: return "Case3";
    case CaseId::Case4: return "Case4";
    case CaseId::Case5: return "Case5";
    case CaseId::Case6: return "Case6";
    case CaseId::NuClampLow: return "NuClampLow";
    case CaseId::NuClampHigh: return "NuClampHigh";
  }
  return "?";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Flat: return "Flat";
    case Regime::Interpolated: return "Interpolated";
    case Regime::Tail: return "Tail";
  }
  return "?";
}

const char* to_string(TraceTag t) {
  switch (t) {
    case ThmA: return "ThmA";
    case ThmB: return "ThmB";
    case Incl3: return "Incl-3";
    case Incl4: return "Incl-4";
    case Incl5: return "Incl-5";
    case Incl6: return "Incl-6";
    case ThmC: return "ThmC";
    case ThmD: return "ThmD";
    case Kq2: return "kq2";
    case NormTransfer: return "NormTransfer";
  }
  return "?";
}

double width_exact(const Exponent& p, const Exponent& q, int m, long n) {
  if (!(q <= p)) throw std::invalid_argument("width_exact: no exact formula for q > p");
  if (m < 1 || n < 0 || n >= m) throw std::invalid_argument("width_exact: need 0 <= n < m");
  return std::pow(static_cast<double>(m - n), q.inv() - p.inv());
}

double order_ball(const Exponent& p, const Exponent& q, int m, long n) {
  if (q <= p) return width_exact(p, q, m, n);
  if (q.is_infinite()) throw std::invalid_argument("order_ball: p < q = inf is not covered");
  if (m < 1 || n < 0 || 2 * n > m) throw std::invalid_argument("order_ball: need 0 <= n <= m/2");
  if (q.inv() >= 0.5) return 1.0;
  const double nd = static_cast<double>(n);
  if (nd <= flat_end(m, q)) return 1.0;
  return std::pow(clipped_ratio(nd, m, q), lambda_pq(p, q));
}

CaseId classify(const ProblemParams& p) {
  const double a0 = p.p0.inv(), a1 = p.p1.inv(), b = p.q.inv();
  if (a0 >= b && b >= 0.5) return CaseId::TrivialSmallQ;
  if (a0 >= 0.5 && b < 0.5) return CaseId::TrivialP0le2;
  if (a1 > 0.5 && 0.5 > a0 && a0 > b) return CaseId::Case1;
  if (a1 <= 0.5 && a0 > b) return CaseId::Case2;
  if (a1 <= 0.5 && a1 >= b && b >= a0) return CaseId::Case3;
  if (a1 > 0.5 && b < 0.5 && b >= a0) return CaseId::Case4;
  if (b >= 0.5 && a1 > b && b > a0) return CaseId::Case5;
  if (b >= a1) return CaseId::Case6;
  throw NotCovered("parameters not covered by the intersection estimate");
}

double case_formula(CaseId id, Regime regime, const ProblemParams& p, double n) {
  const double a0 = p.p0.inv(), a1 = p.p1.inv(), b = p.q.inv();
  const double k = p.k;
  const double md = static_cast<double>(p.m);
  switch (id) {
    case CaseId::TrivialSmallQ:
      return 1.0;
    case CaseId::TrivialP0le2:
      return regime == Regime::Flat ? 1.0 : clipped_ratio(n, p.m, p.q);
    case CaseId::Case1:
    case CaseId::Case2:
      if (regime == Regime::Flat) return 1.0;
      if (regime == Regime::Interpolated) return std::pow(clipped_ratio(n, p.m, p.q), lambda_pq(p.p0, p.q));
      if (id == CaseId::Case1) return std::pow(k, 0.5 - a0) * clipped_ratio(n, p.m, p.q);
      return std::pow(k, a1 - a0) * std::pow(clipped_ratio(n, p.m, p.q), lambda_pq(p.p1, p.q));
    case CaseId::Case3:
    case CaseId::Case4:
      if (regime != Regime::Tail) return std::pow(k, b - a0);
      if (id == CaseId::Case4) return std::pow(k, 0.5 - a0) * clipped_ratio(n, p.m, p.q);
      return std::pow(k, a1 - a0) * std::pow(clipped_ratio(n, p.m, p.q), lambda_pq(p.p1, p.q));
    case CaseId::Case5:
      return std::pow(k, b - a0);
    case CaseId::Case6:
      return std::pow(k, a1 - a0) * std::pow(md, b - a1);
    case CaseId::NuClampLow:
    case CaseId::NuClampHigh:
      break;
  }
  throw std::invalid_argument("case_formula: clamp cases have no branch formula");
}

OrderEstimate evaluate_case(CaseId id, const ProblemParams& p) {
  OrderEstimate est;
  est.case_id = id;
  est.regime = select_regime(id, p);
  est.value = case_formula(id, est.regime, p, static_cast<double>(p.n));
  est.trace = trace_for(id, est.regime);
  return est;
}

OrderEstimate order_intersection(const ProblemParams& p) {
  validate(p);
  if (p.clamp != ProblemParams::Clamp::None) {
    OrderEstimate est;
    const bool low = p.clamp == ProblemParams::Clamp::Low;
    const Exponent& ball = low ? p.p1 : p.p0;
    est.case_id = low ? CaseId::NuClampLow : CaseId::NuClampHigh;
    est.value = (low ? p.nu_input : 1.0) * order_ball(ball, p.q, p.m, p.n);
    const TraceTag tag = p.q <= ball ? ThmB : ThmA;
    est.trace = upper_lower({tag}, {tag});
    return est;
  }
  return evaluate_case(classify(p), p);
}

std::string describe_derivation(const OrderEstimate& est) {
  auto explain = [](TraceTag t) -> const char* {
    switch (t) {
      case ThmA: return "ball order estimate for p <= q";
      case ThmB: return "exact ball width (m-n)^{1/q-1/p} for q <= p";
      case Incl3: return "B_p0 ∩ nu B_p1 ⊂ k^{1/q-1/p0} B_q (Hoelder interpolation)";
      case Incl4: return "B_p0 ∩ nu B_p1 ⊂ k^{1/2-1/p0} B_2 (Hoelder interpolation at q = 2)";
      case Incl5: return "k^{-1/p0} V_k ⊂ B_p0 ∩ nu B_p1";
      case Incl6: return "k^{1/p1-1/p0} m^{-1/p1} B_inf ⊂ B_p0 ∩ nu B_p1";
      case ThmC: return "V_k lower bound k^{1/q} for q >= 2 and small n";
      case ThmD: return "V_k lower bound k^{1/q} for 1 < q <= 2";
      case Kq2: return "V_k averaging bound k^{1/2}(1-n/m)^{1/2} in l_2";
      case NormTransfer: return "||x||_q >= m^{1/q-1/2} ||x||_2 for q >= 2";
    }
    return "";
  };
  std::ostringstream os;
  os << to_string(est.case_id);
  if (est.case_id != CaseId::NuClampLow && est.case_id != CaseId::NuClampHigh) os << '/' << to_string(est.regime);
  for (BoundSide side : {BoundSide::Upper, BoundSide::Lower}) {
    os << (side == BoundSide::Upper ? "; upper:" : "; lower:");
    bool first = true;
    for (const auto& step : est.trace) {
      if (step.side != side) continue;
      os << (first ? " " : " -> ") << to_string(step.tag) << " [" << explain(step.tag) << ']';
      first = false;
    }
  }
  return os.str();
}

}  // namespace nwidth
