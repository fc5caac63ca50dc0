#include "jigglekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jigglekit {

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

Matrix orthogonal_complement(const Matrix& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index k = q.cols();
  Matrix out(n, n - k);
  Matrix basis(n, k + (n - k));
  basis.leftCols(k) = q;
  Eigen::Index have = k;
  std::vector<bool> used(n, false);
  for (Eigen::Index step = 0; step < n - k; ++step) {
    // pick the standard vector with the largest residual
    Eigen::Index best = -1;
    double best_norm = -1.0;
    Eigen::VectorXd best_res;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[i]) continue;
      Eigen::VectorXd r = Eigen::VectorXd::Unit(n, i);
      for (int pass = 0; pass < 2; ++pass)
        r -= basis.leftCols(have) * (basis.leftCols(have).transpose() * r);
      const double nr = r.norm();
      if (nr > best_norm + 1e-12) {
        best_norm = nr;
        best = i;
        best_res = r;
      }
    }
    used[best] = true;
    best_res /= best_norm;
    basis.col(have) = best_res;
    out.col(step) = best_res;
    ++have;
  }
  return out;
}

Matrix pseudo_inverse(const Matrix& a, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  const double cut = s.size() ? rel_tol * s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Matrix columns(const std::vector<Point>& pts) {
  if (pts.empty()) return Matrix(0, 0);
  Matrix m(pts.front().size(), static_cast<Eigen::Index>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts[i];
  return m;
}

Matrix edge_matrix(const std::vector<Point>& verts) {
  const Eigen::Index n = verts.empty() ? 0 : verts.front().size();
  const Eigen::Index m = verts.empty() ? 0 : static_cast<Eigen::Index>(verts.size()) - 1;
  Matrix a(n, m);
  for (Eigen::Index i = 0; i < m; ++i) a.col(i) = verts[i + 1] - verts[0];
  return a;
}

namespace {

constexpr double kPivotTol = 1e-9;

void pivot(Matrix& t, std::vector<Eigen::Index>& basis, Eigen::Index row, Eigen::Index col) {
  t.row(row) /= t(row, col);
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    if (i == row) continue;
    const double f = t(i, col);
    if (f != 0.0) t.row(i) -= f * t.row(row);
  }
  basis[row] = col;
}

// Maximizes cost.x over the tableau, entering only columns < allowed.
// Returns false on unboundedness or iteration exhaustion.
bool run_simplex(Matrix& t, std::vector<Eigen::Index>& basis, const Eigen::VectorXd& cost,
                 Eigen::Index allowed) {
  const Eigen::Index m = t.rows();
  const Eigen::Index rhs = t.cols() - 1;
  for (int iter = 0; iter < 5000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < allowed; ++j) {
      double r = cost(j);
      for (Eigen::Index i = 0; i < m; ++i) r -= cost(basis[i]) * t(i, j);
      if (r > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= kPivotTol) continue;
      const double ratio = t(i, rhs) / t(i, enter);
      if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) return false;
    pivot(t, basis, leave, enter);
  }
  return false;
}

}  // namespace

std::optional<double> lp_maximize(const Eigen::VectorXd& c, const Matrix& a_eq,
                                  const Eigen::VectorXd& b_eq) {
  const Eigen::Index m = a_eq.rows();
  const Eigen::Index n = a_eq.cols();
  Matrix t = Matrix::Zero(m, n + m + 1);
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b_eq(i) < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * a_eq.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b_eq(i);
    basis[i] = n + i;
  }
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setConstant(-1.0);
  if (!run_simplex(t, basis, phase1, n + m)) return std::nullopt;
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] >= n) infeas += t(i, n + m);
  const double scale = std::max(1.0, b_eq.cwiseAbs().maxCoeff());
  if (infeas > 1e-9 * scale) return std::nullopt;
  // drive leftover artificials out on the largest available entry
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    Eigen::Index best = -1;
    double big = 1e-7;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(t(i, j)) > big) {
        big = std::abs(t(i, j));
        best = j;
      }
    if (best >= 0) pivot(t, basis, i, best);
  }
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  if (!run_simplex(t, basis, phase2, n)) return std::nullopt;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) x(basis[i]) = t(i, n + m);
  if (x.minCoeff() < -1e-9 * scale || (a_eq * x - b_eq).cwiseAbs().maxCoeff() > 1e-8 * scale)
    return std::nullopt;
  return c.dot(x);
}

IntersectionProbe probe_intersection(const std::vector<Point>& sigma,
                                     const std::vector<Point>& tau,
                                     const std::vector<std::pair<int, int>>& shared) {
  const Eigen::Index a = static_cast<Eigen::Index>(sigma.size());
  const Eigen::Index b = static_cast<Eigen::Index>(tau.size());
  const Eigen::Index n = sigma.front().size();
  // normalize coordinates for conditioning
  Point center = Point::Zero(n);
  for (const auto& p : sigma) center += p;
  for (const auto& p : tau) center += p;
  center /= static_cast<double>(a + b);
  double scale = 0.0;
  for (const auto& p : sigma) scale = std::max(scale, (p - center).cwiseAbs().maxCoeff());
  for (const auto& p : tau) scale = std::max(scale, (p - center).cwiseAbs().maxCoeff());
  if (scale == 0.0) scale = 1.0;

  Matrix aeq = Matrix::Zero(n + 2, a + b);
  Eigen::VectorXd beq = Eigen::VectorXd::Zero(n + 2);
  for (Eigen::Index i = 0; i < a; ++i) {
    aeq.col(i).head(n) = (sigma[i] - center) / scale;
    aeq(n, i) = 1.0;
  }
  for (Eigen::Index j = 0; j < b; ++j) {
    aeq.col(a + j).head(n) = -(tau[j] - center) / scale;
    aeq(n + 1, a + j) = 1.0;
  }
  beq(n) = 1.0;
  beq(n + 1) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Ones(a + b);
  for (const auto& [i, j] : shared) {
    c(i) = 0.0;
    c(a + j) = 0.0;
  }
  const auto value = lp_maximize(c, aeq, beq);
  IntersectionProbe out;
  if (!value) return out;
  out.intersect = true;
  out.excess = std::max(0.0, *value);
  return out;
}

}  // namespace jigglekit
