#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nwidth/bodies.hpp"
#include "nwidth/exponent.hpp"

namespace nwidth {

// An n-dimensional subspace of R^m held through an orthonormal basis (m x n columns).
class Subspace {
 public:
  static Subspace empty(int m);
  static Subspace coordinate(int m, std::span<const int> axes);
  // Orthonormalises the columns (Householder QR plus one re-orthogonalisation pass).
  // Throws if the columns are numerically dependent.
  static Subspace from_columns(const Eigen::MatrixXd& columns);

  int m() const { return static_cast<int>(basis_.rows()); }
  int n() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  // Orthogonal projection onto the complement.
  Vector residual(const Eigen::Ref<const Vector>& x) const;
  // max |<b_i, b_j> - delta_ij|.
  double orthonormality_error() const;

 private:
  explicit Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}
  Eigen::MatrixXd basis_;
};

struct SearchConfig {
  int restarts = 8;
  int ascent_iters = 50;
  int refine_rounds = 4;
  std::uint64_t seed = 0;
  long vertex_cap = kDefaultVertexCap;
  double tol = 1e-8;
  int threads = 1;
};

struct Distance {
  double value = 0.0;
  // Dual certificate: w orthogonal to the subspace with ||w||_{q'} <= 1, so that
  // dist(z, L) >= <w, z> for every z, with equality (up to tolerance) at z = x.
  Vector certificate;
  bool stale = false;  // iteration cap hit before convergence
};

// min over y in L of ||x - y||_q: closed form for q = 2, simplex for q in {1, inf},
// damped Newton otherwise.
double dist_to_subspace(const Eigen::Ref<const Vector>& x, const Subspace& L, const Exponent& q, double tol = 1e-10);

// Same value together with a dual certificate. For q in {1, inf} this solves the dual
// linear program, giving a second route to the distance.
Distance dist_with_certificate(const Eigen::Ref<const Vector>& x, const Subspace& L, const Exponent& q,
                               double tol = 1e-10);

struct Deviation {
  double value = 0.0;
  Vector worst_point;
  bool exact = false;  // vertex maximum; otherwise best value found by ascent
  std::vector<Vector> worst_points;
};

// sup over the body of dist(x, L) in l_q. Exact vertex maximum for polytope bodies,
// multistart alternating ascent otherwise. `warm_starts` seed the ascent.
Deviation deviation(const BodySpec& body, const Subspace& L, const Exponent& q, const SearchConfig& cfg = {},
                    std::span<const Vector> warm_starts = {});

enum class LowerMethod { PcaL2, NormTransfer, ExactThmB, CubeThmB, None };
const char* to_string(LowerMethod m);

struct LowerBound {
  double value = 0.0;
  LowerMethod method = LowerMethod::None;
  int vk_order = 0;  // k' of the inscribed scaled V_k' for PcaL2 / NormTransfer
};

struct WidthBounds {
  double upper = 0.0;
  Subspace upper_certificate = Subspace::empty(1);
  bool upper_heuristic = false;
  double lower = 0.0;
  LowerMethod lower_method = LowerMethod::None;
  BodySpec body = BodySpec::ball(1, Exponent(2.0));
  long n = 0;
  Exponent q{2.0};
};

// Best subspace found for each dimension 0..n_max. Level j considers the first j
// coordinate axes, the extension of the level j-1 winner, cfg.restarts random bases and
// cfg.refine_rounds principal-direction refits of the worst points.
std::vector<WidthBounds> width_upper_profile(const BodySpec& body, long n_max, const Exponent& q,
                                             const SearchConfig& cfg = {});

WidthBounds width_upper(const BodySpec& body, long n, const Exponent& q, const SearchConfig& cfg = {});

// Orbit-averaged Gram matrix (1/N) sum v v^T over the vertices of V_k.
Eigen::MatrixXd orbit_gram(int m, int k, long cap = kDefaultVertexCap);

// sqrt of the sum of the m-n smallest eigenvalues of the V_k orbit Gram matrix, a lower
// bound for d_n(V_k, l_2). The explicit variant always enumerates; the default one falls
// back to the exact symmetric form (k/m) I when the orbit exceeds the cap.
double pca_lower_l2(int m, int k, long n, long cap = kDefaultVertexCap);
double pca_lower_l2_explicit(int m, int k, long n, long cap = kDefaultVertexCap);

// m^{1/q-1/2} lower2: an l_q width lower bound from an l_2 one, q >= 2.
double transfer_lower(const Exponent& q, int m, double lower2);

// Largest lower bound available for d_n(body, l_q) from the inscribed V_k', the inscribed
// cube, and exact ball widths.
LowerBound best_lower(const BodySpec& body, long n, const Exponent& q, long cap = kDefaultVertexCap);

WidthBounds width_bounds(const BodySpec& body, long n, const Exponent& q, const SearchConfig& cfg = {});

}  // namespace nwidth
