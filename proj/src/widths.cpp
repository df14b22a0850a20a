#include "nwidth/widths.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "nwidth/order.hpp"
#include "nwidth/random.hpp"
#include "nwidth/simplex.hpp"

namespace nwidth {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finaliser over the three inputs.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Runs fn(i) for i in [0, count). Work is split into contiguous blocks; callers write
// results into per-index slots, so the outcome does not depend on the thread count.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
}

Vector normalized_certificate(Vector w, const Subspace& L, const Exponent& q) {
  if (L.n() > 0) w -= L.basis() * (L.basis().transpose() * w);
  const double norm = lp_norm(w, q.conjugate());
  if (norm > 1.0) w /= norm;
  return w;
}

Distance norm_distance(const Eigen::Ref<const Vector>& x, const Exponent& q) {
  Distance d;
  d.value = lp_norm(x, q);
  d.certificate = Vector::Zero(x.size());
  if (d.value == 0.0) return d;
  // Support point of the dual ball in direction x.
  const Exponent qd = q.conjugate();
  if (qd.is_infinite()) {
    for (Eigen::Index i = 0; i < x.size(); ++i) d.certificate(i) = x(i) < 0 ? -1.0 : (x(i) > 0 ? 1.0 : 0.0);
  } else if (qd.inv() == 1.0) {
    Eigen::Index j = 0;
    x.cwiseAbs().maxCoeff(&j);
    d.certificate(j) = x(j) < 0 ? -1.0 : 1.0;
  } else {
    const double scale = x.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < x.size(); ++i)
      d.certificate(i) = (x(i) < 0 ? -1.0 : 1.0) * std::pow(std::abs(x(i)) / scale, q.value() - 1.0);
    d.certificate /= lp_norm(d.certificate, qd);
  }
  return d;
}

// min_c ||x - B c||_1 or ||x - B c||_inf as a linear program in standard form.
double lp_primal_distance(const Eigen::Ref<const Vector>& x, const Subspace& L, bool sup_norm) {
  const int m = L.m(), n = L.n();
  const int t_count = sup_norm ? 1 : m;
  const int vars = 2 * n + t_count + 2 * m;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, vars);
  Vector b(2 * m), c = Vector::Zero(vars);
  const auto& B = L.basis();
  for (int i = 0; i < m; ++i) {
    A.block(i, 0, 1, n) = B.row(i);
    A.block(i, n, 1, n) = -B.row(i);
    A.block(m + i, 0, 1, n) = -B.row(i);
    A.block(m + i, n, 1, n) = B.row(i);
    const int t = 2 * n + (sup_norm ? 0 : i);
    A(i, t) = 1.0;
    A(m + i, t) = 1.0;
    A(i, 2 * n + t_count + i) = -1.0;
    A(m + i, 2 * n + t_count + m + i) = -1.0;
    b(i) = x(i);
    b(m + i) = -x(i);
  }
  c.segment(2 * n, t_count).setOnes();
  const lp::Result r = lp::minimize(A, b, c);
  if (r.status != lp::Status::Optimal) throw std::runtime_error("dist_to_subspace: simplex failed");
  return r.objective;
}

// max <x, w> over w orthogonal to L with ||w||_{q'} <= 1, for q in {1, inf}.
Distance lp_dual_distance(const Eigen::Ref<const Vector>& x, const Subspace& L, bool sup_norm) {
  const int m = L.m(), n = L.n();
  const auto& B = L.basis();
  Distance d;
  if (!sup_norm) {
    // w = u - 1 with 0 <= u <= 2.
    const int vars = 2 * m;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + m, vars);
    Vector b(n + m), c = Vector::Zero(vars);
    A.block(0, 0, n, m) = B.transpose();
    b.head(n) = B.transpose() * Vector::Ones(m);
    for (int i = 0; i < m; ++i) {
      A(n + i, i) = 1.0;
      A(n + i, m + i) = 1.0;
      b(n + i) = 2.0;
    }
    c.head(m) = -x;
    const lp::Result r = lp::minimize(A, b, c);
    if (r.status != lp::Status::Optimal) throw std::runtime_error("dist_with_certificate: simplex failed");
    d.certificate = r.x.head(m) - Vector::Ones(m);
  } else {
    // w = u - v, sum(u + v) <= 1.
    const int vars = 2 * m + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, vars);
    Vector b = Vector::Zero(n + 1), c = Vector::Zero(vars);
    A.block(0, 0, n, m) = B.transpose();
    A.block(0, m, n, m) = -B.transpose();
    A.row(n).setOnes();
    b(n) = 1.0;
    c.head(m) = -x;
    c.segment(m, m) = x;
    const lp::Result r = lp::minimize(A, b, c);
    if (r.status != lp::Status::Optimal) throw std::runtime_error("dist_with_certificate: simplex failed");
    d.certificate = r.x.head(m) - r.x.segment(m, m);
  }
  d.value = d.certificate.dot(x);
  return d;
}

// Damped Newton on sum |x - B c|^q for 1 < q < inf.
Distance smooth_distance(const Eigen::Ref<const Vector>& x_in, const Subspace& L, const Exponent& q, double tol) {
  const auto& B = L.basis();
  const double scale = x_in.cwiseAbs().maxCoeff();
  Distance d;
  if (scale == 0.0) {
    d.certificate = Vector::Zero(x_in.size());
    return d;
  }
  const Vector x = x_in / scale;
  const double qv = q.value();
  auto objective = [&](const Vector& c) {
    const Vector r = x - B * c;
    double s = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) s += std::pow(std::abs(r(i)), qv);
    return s;
  };
  Vector c = B.transpose() * x;
  double f = objective(c);
  const int max_iter = 500;
  int it = 0;
  for (; it < max_iter; ++it) {
    const Vector r = x - B * c;
    Vector psi(r.size()), weight(r.size());
    const double floor = 1e-9 * std::max(1e-300, r.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double a = std::abs(r(i));
      psi(i) = (r(i) < 0 ? -1.0 : 1.0) * std::pow(a, qv - 1.0);
      weight(i) = std::pow(std::max(a, floor), qv - 2.0);
    }
    const Vector grad = -qv * (B.transpose() * psi);
    Eigen::MatrixXd H = qv * (qv - 1.0) * (B.transpose() * weight.asDiagonal() * B);
    H.diagonal().array() += 1e-14 * std::max(1.0, H.trace());
    Vector step = -H.ldlt().solve(grad);
    if (!step.allFinite() || step.dot(grad) >= 0.0) step = -grad;
    double t = 1.0;
    double f_new = objective(c + step);
    while (f_new > f + 1e-4 * t * step.dot(grad) && t > 1e-12) {
      t *= 0.5;
      f_new = objective(c + t * step);
    }
    if (f_new >= f) break;
    c += t * step;
    const double drop = f - f_new;
    f = f_new;
    if (drop <= tol * tol * std::max(f, 1e-300) || (t * step).norm() <= tol * tol) break;
  }
  d.stale = it == max_iter;
  const Vector r = x - B * c;
  d.value = scale * lp_norm(r, q);
  Distance nd = norm_distance(r, q);
  d.certificate = nd.certificate;
  return d;
}

// Vertex of V_k with ||P x||_2^2 >= (k/m) tr P, P the projection onto the complement of L,
// by conditional expectations over a uniformly random vertex.
Vector derandomized_vk_vertex(const Subspace& L, int k) {
  const int m = L.m();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m);
  if (L.n() > 0) P -= L.basis() * L.basis().transpose();
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return P(a, a) > P(b, b); });
  Vector v = Vector::Zero(m);
  for (int s = 0; s < k; ++s) {
    const int i = idx[s];
    double pull = 0.0;
    for (int t = 0; t < s; ++t) pull += v(idx[t]) * P(i, idx[t]);
    v(i) = pull < 0.0 ? -1.0 : 1.0;
  }
  return v;
}

struct AscentResult {
  double value = 0.0;
  Vector point;
};

AscentResult ascend(const BodySpec& body, const Subspace& L, const Exponent& q, Vector x, const SearchConfig& cfg) {
  AscentResult out;
  const double g = gauge(body, x);
  if (!(g > 0.0) || !std::isfinite(g)) return out;
  x /= g;
  Distance f = dist_with_certificate(x, L, q, cfg.tol * 1e-2);
  for (int it = 0; it < cfg.ascent_iters; ++it) {
    if (f.certificate.cwiseAbs().maxCoeff() == 0.0) break;
    Vector next = support(body, f.certificate).point;
    Distance fn = dist_with_certificate(next, L, q, cfg.tol * 1e-2);
    if (fn.value <= f.value + cfg.tol * std::max(1.0, f.value)) break;
    x = std::move(next);
    f = std::move(fn);
  }
  out.value = f.value;
  out.point = std::move(x);
  return out;
}

std::vector<Vector> top_points(std::vector<std::pair<double, Vector>>& scored, std::size_t count) {
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Vector> out;
  for (auto& [value, point] : scored) {
    if (out.size() >= count) break;
    (void)value;
    out.push_back(point);
  }
  return out;
}

// First n independent directions of `columns` (in order), orthonormalised.
Subspace span_first(int m, int n, const std::vector<Vector>& columns) {
  Eigen::MatrixXd Q(m, 0);
  for (const Vector& col : columns) {
    if (Q.cols() == n) break;
    Vector v = col;
    for (int pass = 0; pass < 2; ++pass) v -= Q * (Q.transpose() * v);
    const double norm = v.norm();
    if (norm <= 1e-9 * std::max(1.0, col.norm())) continue;
    Q.conservativeResize(m, Q.cols() + 1);
    Q.col(Q.cols() - 1) = v / norm;
  }
  for (int i = 0; i < m && Q.cols() < n; ++i) {
    Vector v = Vector::Unit(m, i);
    for (int pass = 0; pass < 2; ++pass) v -= Q * (Q.transpose() * v);
    const double norm = v.norm();
    if (norm <= 1e-6) continue;
    Q.conservativeResize(m, Q.cols() + 1);
    Q.col(Q.cols() - 1) = v / norm;
  }
  return Subspace::from_columns(Q);
}

double vk_l2_bound(int m, int k, long n) {
  return std::sqrt(static_cast<double>(k) * static_cast<double>(m - n) / static_cast<double>(m));
}

}  // namespace

Subspace Subspace::empty(int m) {
  if (m < 1) throw std::invalid_argument("subspace: m must be positive");
  return Subspace(Eigen::MatrixXd(m, 0));
}

Subspace Subspace::coordinate(int m, std::span<const int> axes) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] < 0 || axes[j] >= m) throw std::invalid_argument("subspace: axis out of range");
    B(axes[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  return from_columns(B);
}

Subspace Subspace::from_columns(const Eigen::MatrixXd& columns) {
  const Eigen::Index m = columns.rows(), n = columns.cols();
  if (m < 1) throw std::invalid_argument("subspace: m must be positive");
  if (n > m) throw std::invalid_argument("subspace: more columns than the ambient dimension");
  if (n == 0) return empty(static_cast<int>(m));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(columns);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const double ref = std::max(1e-300, columns.colwise().norm().maxCoeff());
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::abs(R(j, j)) <= 1e-10 * ref) throw std::invalid_argument("subspace: columns are linearly dependent");
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  // Re-orthogonalisation pass.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) Q.col(j) -= Q.col(i).dot(Q.col(j)) * Q.col(i);
    Q.col(j).normalize();
  }
  return Subspace(std::move(Q));
}

Vector Subspace::residual(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != m()) throw std::invalid_argument("subspace: dimension mismatch");
  if (n() == 0) return x;
  return x - basis_ * (basis_.transpose() * x);
}

double Subspace::orthonormality_error() const {
  if (n() == 0) return 0.0;
  const Eigen::MatrixXd G = basis_.transpose() * basis_ - Eigen::MatrixXd::Identity(n(), n());
  return G.cwiseAbs().maxCoeff();
}

double dist_to_subspace(const Eigen::Ref<const Vector>& x, const Subspace& L, const Exponent& q, double tol) {
  if (x.size() != L.m()) throw std::invalid_argument("dist_to_subspace: dimension mismatch");
  if (L.n() == 0) return lp_norm(x, q);
  if (L.n() == L.m()) return 0.0;
  if (q.inv() == 0.5) return L.residual(x).norm();
  if (q.is_infinite() || q.inv() == 1.0) return lp_primal_distance(x, L, q.is_infinite());
  return smooth_distance(x, L, q, tol).value;
}

Distance dist_with_certificate(const Eigen::Ref<const Vector>& x, const Subspace& L, const Exponent& q, double tol) {
  if (x.size() != L.m()) throw std::invalid_argument("dist_with_certificate: dimension mismatch");
  Distance d;
  if (L.n() == L.m()) {
    d.certificate = Vector::Zero(x.size());
    return d;
  }
  if (L.n() == 0) return norm_distance(x, q);
  if (q.inv() == 0.5) {
    const Vector r = L.residual(x);
    d.value = r.norm();
    d.certificate = d.value > 0.0 ? Vector(r / d.value) : Vector::Zero(x.size());
    return d;
  }
  if (q.is_infinite() || q.inv() == 1.0) {
    d = lp_dual_distance(x, L, q.is_infinite());
  } else {
    d = smooth_distance(x, L, q, tol);
  }
  d.certificate = normalized_certificate(std::move(d.certificate), L, q);
  return d;
}

Deviation deviation(const BodySpec& body, const Subspace& L, const Exponent& q, const SearchConfig& cfg,
                    std::span<const Vector> warm_starts) {
  if (L.m() != body.m()) throw std::invalid_argument("deviation: dimension mismatch");
  const int m = body.m();
  const std::size_t keep = static_cast<std::size_t>(std::max(4, L.n() + 2));
  Deviation out;
  if (L.n() == m) {
    out.exact = true;
    out.worst_point = Vector::Zero(m);
    return out;
  }

  std::vector<std::pair<double, Vector>> scored;
  if (body.is_polytope()) {
    std::vector<Vector> vertices = polytope_vertices(body, cfg.vertex_cap);
    // Symmetric bodies: v and -v are equidistant, keep one of each pair.
    std::erase_if(vertices, [](const Vector& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0.0) return v(i) < 0.0;
      return false;
    });
    std::vector<double> values(vertices.size());
    parallel_for(static_cast<int>(vertices.size()), cfg.threads,
                 [&](int i) { values[i] = dist_to_subspace(vertices[i], L, q, cfg.tol * 1e-2); });
    for (std::size_t i = 0; i < vertices.size(); ++i) scored.emplace_back(values[i], std::move(vertices[i]));
    out.exact = true;
  } else {
    std::vector<Vector> starts(warm_starts.begin(), warm_starts.end());
    std::vector<int> orders{1, m};
    const LowerBound lb = best_lower(body, L.n(), q, cfg.vertex_cap);
    if (lb.vk_order > 0) orders.push_back(lb.vk_order);
    for (int k : orders) starts.push_back(derandomized_vk_vertex(L, k));
    for (int i = 0; i < cfg.restarts; ++i) {
      auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(i), 0xDE5);
      starts.push_back(gaussian_vector(rng, m));
    }
    std::vector<AscentResult> results(starts.size());
    parallel_for(static_cast<int>(starts.size()), cfg.threads,
                 [&](int i) { results[i] = ascend(body, L, q, starts[i], cfg); });
    for (auto& r : results)
      if (r.point.size() == m) scored.emplace_back(r.value, std::move(r.point));
    out.exact = false;
  }
  if (scored.empty()) throw std::runtime_error("deviation: no candidate points");
  // Ties go to the earliest point: stable sort keeps input order.
  out.worst_points = top_points(scored, keep);
  out.value = scored.front().first;
  out.worst_point = out.worst_points.front();
  return out;
}

const char* to_string(LowerMethod m) {
  switch (m) {
    case LowerMethod::PcaL2: return "PCA-l2";
    case LowerMethod::NormTransfer: return "NormTransfer";
    case LowerMethod::ExactThmB: return "ExactThmB";
    case LowerMethod::CubeThmB: return "CubeThmB";
    case LowerMethod::None: return "None";
  }
  return "?";
}

std::vector<WidthBounds> width_upper_profile(const BodySpec& body, long n_max, const Exponent& q,
                                             const SearchConfig& cfg) {
  const int m = body.m();
  if (n_max < 0 || n_max > m) throw std::invalid_argument("width_upper: need 0 <= n <= m");
  if (cfg.restarts < 0 || cfg.ascent_iters < 1 || cfg.refine_rounds < 0 || cfg.vertex_cap < 1 || !(cfg.tol > 0.0))
    throw std::invalid_argument("width_upper: invalid search configuration");

  std::vector<WidthBounds> profile;
  std::vector<Vector> prev_worst;
  auto record = [&](long n, const Subspace& L, const Deviation& dev) {
    WidthBounds wb;
    wb.upper = dev.value;
    wb.upper_certificate = L;
    wb.upper_heuristic = !dev.exact;
    wb.body = body;
    wb.n = n;
    wb.q = q;
    profile.push_back(std::move(wb));
    prev_worst = dev.worst_points;
  };

  {
    SearchConfig c0 = cfg;
    c0.seed = mix_seed(cfg.seed, 0, 0);
    const Subspace L = Subspace::empty(m);
    record(0, L, deviation(body, L, q, c0));
  }

  for (long j = 1; j <= n_max; ++j) {
    if (j == m) {
      Deviation full;
      full.exact = true;
      full.worst_point = Vector::Zero(m);
      record(j, Subspace::from_columns(Eigen::MatrixXd::Identity(m, m)), full);
      continue;
    }
    const WidthBounds& prev = profile.back();
    std::vector<Subspace> candidates;
    std::vector<int> axes(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) axes[i] = i;
    candidates.push_back(Subspace::coordinate(m, axes));

    // Extension of the previous winner by the residual of its worst point.
    std::vector<Vector> ext_cols;
    for (int i = 0; i < prev.upper_certificate.n(); ++i) ext_cols.push_back(prev.upper_certificate.basis().col(i));
    if (!prev_worst.empty()) ext_cols.push_back(prev.upper_certificate.residual(prev_worst.front()));
    candidates.push_back(span_first(m, static_cast<int>(j), ext_cols));
    const int ext_index = 1;

    for (int r = 0; r < cfg.restarts; ++r) {
      auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(j), 0x5EED0000ULL + r);
      Eigen::MatrixXd G(m, j);
      for (int c = 0; c < j; ++c) G.col(c) = gaussian_vector(rng, m);
      candidates.push_back(span_first(m, static_cast<int>(j), {G.colwise().begin(), G.colwise().end()}));
    }

    std::vector<Deviation> devs(candidates.size());
    SearchConfig inner = cfg;
    inner.threads = 1;
    parallel_for(static_cast<int>(candidates.size()), cfg.threads, [&](int i) {
      SearchConfig c = inner;
      c.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i));
      devs[i] = deviation(body, candidates[i], q, c, prev_worst);
    });
    // The extension contains the previous subspace, so its deviation cannot exceed the
    // previous one; keep the estimates consistent with that.
    if (devs[ext_index].value > prev.upper) {
      devs[ext_index].value = prev.upper;
      devs[ext_index].exact = devs[ext_index].exact && !prev.upper_heuristic;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < devs.size(); ++i)
      if (devs[i].value < devs[best].value) best = i;
    Subspace best_L = candidates[best];
    Deviation best_dev = devs[best];

    std::vector<Vector> pool = best_dev.worst_points;
    for (int round = 0; round < cfg.refine_rounds; ++round) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
      for (const Vector& x : pool) M += x * x.transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
      std::vector<Vector> cols;
      for (int c = m - 1; c >= 0; --c)
        if (eig.eigenvalues()(c) > 1e-12 * std::max(1.0, eig.eigenvalues()(m - 1))) cols.push_back(eig.eigenvectors().col(c));
      for (int c = 0; c < best_L.n(); ++c) cols.push_back(best_L.basis().col(c));
      Subspace refit = span_first(m, static_cast<int>(j), cols);
      SearchConfig c = inner;
      c.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(j), 1000 + static_cast<std::uint64_t>(round));
      Deviation dev = deviation(body, refit, q, c, best_dev.worst_points);
      pool.insert(pool.end(), dev.worst_points.begin(), dev.worst_points.end());
      if (dev.value < best_dev.value) {
        best_L = std::move(refit);
        best_dev = std::move(dev);
      }
    }
    record(j, best_L, best_dev);
  }
  return profile;
}

WidthBounds width_upper(const BodySpec& body, long n, const Exponent& q, const SearchConfig& cfg) {
  return width_upper_profile(body, n, q, cfg).back();
}

Eigen::MatrixXd orbit_gram(int m, int k, long cap) {
  const auto vertices = vk_vertices(m, k, cap);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  for (const Vector& v : vertices) G.selfadjointView<Eigen::Lower>().rankUpdate(v);
  G = G.selfadjointView<Eigen::Lower>();
  return G / static_cast<double>(vertices.size());
}

double pca_lower_l2_explicit(int m, int k, long n, long cap) {
  if (n < 0 || n > m) throw std::invalid_argument("pca_lower_l2: need 0 <= n <= m");
  const Eigen::MatrixXd G = orbit_gram(m, k, cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
  const double tail = eig.eigenvalues().head(m - n).sum();
  return std::sqrt(std::max(0.0, tail));
}

double pca_lower_l2(int m, int k, long n, long cap) {
  if (m < 1 || k < 1 || k > m) throw std::invalid_argument("pca_lower_l2: need 1 <= k <= m");
  if (n < 0 || n > m) throw std::invalid_argument("pca_lower_l2: need 0 <= n <= m");
  if (k < 62 && binomial(m, k) <= cap / (1L << k)) return pca_lower_l2_explicit(m, k, n, cap);
  // By sign and permutation symmetry the averaged Gram matrix is (k/m) I.
  return vk_l2_bound(m, k, n);
}

double transfer_lower(const Exponent& q, int m, double lower2) {
  if (q.inv() > 0.5) throw std::invalid_argument("transfer_lower: need q >= 2");
  return std::pow(static_cast<double>(m), q.inv() - 0.5) * lower2;
}

LowerBound best_lower(const BodySpec& body, long n, const Exponent& q, long cap) {
  (void)cap;
  const int m = body.m();
  if (n < 0 || n > m) throw std::invalid_argument("lower bound: need 0 <= n <= m");
  LowerBound best;
  if (n == m) return best;
  auto offer = [&](double value, LowerMethod method, int k) {
    if (value > best.value) best = {value, method, k};
  };

  const double rest = static_cast<double>(m - n);
  if (const auto* ball = std::get_if<Ball>(&body.shape()); ball && q <= ball->p)
    offer(width_exact(ball->p, q, m, n), LowerMethod::ExactThmB, 0);
  if (const auto* cube = std::get_if<ScaledCube>(&body.shape()))
    offer(cube->c * std::pow(rest, q.inv()), LowerMethod::ExactThmB, 0);

  // Inscribed s V_k' with s = 1 / gauge of any V_k' vertex (all share it by symmetry).
  for (int k = 1; k <= m; ++k) {
    Vector v = Vector::Zero(m);
    v.head(k).setOnes();
    const double s = 1.0 / gauge(body, v);
    const double l2 = s * vk_l2_bound(m, k, n);
    if (q.inv() >= 0.5)
      offer(l2, LowerMethod::PcaL2, k);
    else
      offer(transfer_lower(q, m, l2), LowerMethod::NormTransfer, k);
  }

  const double c = 1.0 / gauge(body, Vector::Ones(m));
  offer(c * std::pow(rest, q.inv()), LowerMethod::CubeThmB, 0);
  return best;
}

WidthBounds width_bounds(const BodySpec& body, long n, const Exponent& q, const SearchConfig& cfg) {
  WidthBounds wb = width_upper(body, n, q, cfg);
  const LowerBound lb = best_lower(body, n, q, cfg.vertex_cap);
  wb.lower = lb.value;
  wb.lower_method = lb.method;
  return wb;
}

}  // namespace nwidth
