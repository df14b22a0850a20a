#include "nwidth/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nwidth::lp {

namespace {

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double eps)
      : rows_(static_cast<int>(A.rows())), vars_(static_cast<int>(A.cols())), eps_(eps) {
    const int cols = vars_ + rows_ + 1;
    t_ = Eigen::MatrixXd::Zero(rows_ + 1, cols);
    basis_.resize(rows_);
    for (int i = 0; i < rows_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(vars_) = sign * A.row(i);
      t_(i, vars_ + i) = 1.0;
      t_(i, cols - 1) = sign * b(i);
      basis_[i] = vars_ + i;
    }
    allowed_.assign(vars_ + rows_, true);
  }

  // Phase 1: minimise the sum of artificials.
  void load_phase1() {
    t_.row(rows_).setZero();
    for (int i = 0; i < rows_; ++i) {
      t_.row(rows_).head(vars_) -= t_.row(i).head(vars_);
      t_(rows_, rhs()) -= t_(i, rhs());
    }
  }

  void load_phase2(const Eigen::VectorXd& c) {
    for (int j = vars_; j < vars_ + rows_; ++j) allowed_[j] = false;
    t_.row(rows_).setZero();
    t_.row(rows_).head(vars_) = c.transpose();
    for (int i = 0; i < rows_; ++i) {
      const int bj = basis_[i];
      const double cb = bj < vars_ ? c(bj) : 0.0;
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
  }

  // Moves basic artificials out where a structural column can replace them.
  void expel_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < vars_) continue;
      int best = -1;
      double best_abs = eps_;
      for (int j = 0; j < vars_; ++j) {
        if (std::abs(t_(i, j)) > best_abs) {
          best_abs = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
    }
  }

  Status run(int max_iterations, int& iterations) {
    int degenerate_streak = 0;
    bool bland = false;
    for (; iterations < max_iterations; ++iterations) {
      const int enter = choose_entering(bland);
      if (enter < 0) return Status::Optimal;
      const int leave = choose_leaving(enter);
      if (leave < 0) return Status::Unbounded;
      if (t_(leave, rhs()) <= eps_) {
        if (++degenerate_streak > 50) bland = true;
      } else {
        degenerate_streak = 0;
      }
      pivot(leave, enter);
    }
    return Status::IterationLimit;
  }

  double objective_value() const { return -t_(rows_, rhs()); }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(vars_);
    for (int i = 0; i < rows_; ++i)
      if (basis_[i] < vars_) x(basis_[i]) = std::max(0.0, t_(i, rhs()));
    return x;
  }

 private:
  int rhs() const { return static_cast<int>(t_.cols()) - 1; }

  int choose_entering(bool bland) const {
    int enter = -1;
    double most_negative = -eps_;
    for (int j = 0; j < vars_ + rows_; ++j) {
      if (!allowed_[j]) continue;
      const double d = t_(rows_, j);
      if (bland) {
        if (d < -eps_) return j;
      } else if (d < most_negative) {
        most_negative = d;
        enter = j;
      }
    }
    return enter;
  }

  int choose_leaving(int enter) const {
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows_; ++i) {
      const double a = t_(i, enter);
      if (a <= eps_) continue;
      const double ratio = t_(i, rhs()) / a;
      if (ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 && leave >= 0 && basis_[i] < basis_[leave])) {
        best_ratio = std::min(best_ratio, ratio);
        leave = i;
      }
    }
    return leave;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  int rows_;
  int vars_;
  double eps_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
};

}  // namespace

Result minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                int max_iterations, double eps) {
  if (A.rows() != b.size() || A.cols() != c.size())
    throw std::invalid_argument("lp::minimize: dimension mismatch");
  Result result;
  Tableau tab(A, b, eps);
  tab.load_phase1();
  const Status phase1 = tab.run(max_iterations, result.iterations);
  if (phase1 == Status::IterationLimit) {
    result.status = phase1;
    return result;
  }
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (tab.objective_value() > 1e-8 * scale) {
    result.status = Status::Infeasible;
    return result;
  }
  tab.expel_artificials();
  tab.load_phase2(c);
  result.status = tab.run(max_iterations, result.iterations);
  result.x = tab.solution();
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace nwidth::lp
