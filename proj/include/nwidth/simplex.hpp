#pragma once

#include <Eigen/Dense>

namespace nwidth::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
};

// Dense two-phase tableau simplex for
//     minimize c^T x  subject to  A x = b,  x >= 0.
// Rows with negative b are negated on entry. Dantzig pricing, switching to Bland's rule
// after a run of degenerate pivots so the method cannot cycle.
Result minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                int max_iterations = 50000, double eps = 1e-10);

}  // namespace nwidth::lp
