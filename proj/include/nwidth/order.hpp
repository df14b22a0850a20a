#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nwidth/exponent.hpp"

namespace nwidth {

// Thrown when a parameter tuple falls outside every case of the intersection estimate.
class NotCovered : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CaseId {
  TrivialSmallQ,  // p1 < p0 <= q <= 2
  TrivialP0le2,   // p1 < p0 <= 2 < q
  Case1,          // p1 < 2 < p0 < q < inf
  Case2,          // 2 <= p1 < p0 < q < inf
  Case3,          // 2 <= p1 <= q <= p0
  Case4,          // p1 < 2 < q <= p0
  Case5,          // q <= 2, p1 < q < p0
  Case6,          // q <= p1 < p0
  NuClampLow,     // nu <= 1: body is nu B_p1
  NuClampHigh,    // nu >= m^{1/p1-1/p0}: body is B_p0
};

enum class Regime { Flat, Interpolated, Tail };

enum class TraceTag { ThmA, ThmB, Incl3, Incl4, Incl5, Incl6, ThmC, ThmD, Kq2, NormTransfer };

enum class BoundSide { Upper, Lower };

struct TraceStep {
  BoundSide side;
  TraceTag tag;
};

struct OrderEstimate {
  double value = 0.0;
  CaseId case_id = CaseId::TrivialSmallQ;
  Regime regime = Regime::Flat;
  std::vector<TraceStep> trace;
};

const char* to_string(CaseId id);
const char* to_string(Regime r);
const char* to_string(TraceTag t);

// Ball estimates: exact (m-n)^{1/q-1/p} when q <= p, constant-free order when p < q.
double order_ball(const Exponent& p, const Exponent& q, int m, long n);

// Exact width (m-n)^{1/q-1/p}; requires q <= p and 0 <= n < m.
double width_exact(const Exponent& p, const Exponent& q, int m, long n);

// Constant-free order of d_n(B_p0 ∩ nu B_p1, l_q) with case dispatch and derivation trace.
OrderEstimate order_intersection(const ProblemParams& params);

// Which case the dispatcher picks for the exponent ordering of params (ignores clamping).
CaseId classify(const ProblemParams& params);

// Evaluates the formula of a single case on a regime chosen from n, bypassing the
// ordering checks of the dispatcher. Used to compare formulas on overlapping ranges.
OrderEstimate evaluate_case(CaseId id, const ProblemParams& params);

// One branch formula at a real-valued n, with no regime selection. Cases 1-6 and the
// two small-q reductions only.
double case_formula(CaseId id, Regime regime, const ProblemParams& params, double n);

// Human-readable derivation listing the inclusion and lower-bound steps.
std::string describe_derivation(const OrderEstimate& estimate);

}  // namespace nwidth
