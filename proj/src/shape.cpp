#include "jigglekit/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jigglekit/error.hpp"

namespace jigglekit {

double affine_span_distance(const std::vector<Point>& verts, const Point& x) {
  if (verts.size() == 1) return (x - verts[0]).norm();
  const Matrix a = edge_matrix(verts);
  const Point r = x - verts[0];
  // least squares via complete orthogonal decomposition handles rank loss
  const Eigen::VectorXd coef = a.completeOrthogonalDecomposition().solve(r);
  return (a * coef - r).norm();
}

ShapeStats raw_shape_stats(const std::vector<Point>& verts) {
  ShapeStats st;
  const size_t m = verts.size();
  if (m < 2) return st;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) st.rmax = std::max(st.rmax, (verts[i] - verts[j]).norm());
  st.rmin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < m; ++i) {
    std::vector<Point> rest;
    for (size_t j = 0; j < m; ++j)
      if (j != i) rest.push_back(verts[j]);
    st.rmin = std::min(st.rmin, affine_span_distance(rest, verts[i]));
  }
  const Matrix pinv = pseudo_inverse(edge_matrix(verts));
  st.lambda = pinv.rowwise().norm().maxCoeff();
  return st;
}

bool is_degenerate(const std::vector<Point>& verts, double tol) {
  if (verts.size() < 2) return false;
  if (static_cast<Eigen::Index>(verts.size()) - 1 > verts.front().size()) return true;
  const auto st = raw_shape_stats(verts);
  return !(st.rmin >= tol * st.rmax) || st.rmax == 0.0;
}

ShapeStats shape_stats(const std::vector<Point>& verts) {
  if (is_degenerate(verts)) throw Error(ErrorCode::DegenerateSimplex, "rmin below tolerance");
  return raw_shape_stats(verts);
}

ShapeStats shape_stats(const Simplex& s, const SimplicialComplex& k) {
  return shape_stats(k.points(s));
}

double simplex_volume(const std::vector<Point>& verts) {
  if (verts.size() < 2) return 1.0;
  const Matrix a = edge_matrix(verts);
  const double g = (a.transpose() * a).determinant();
  double fact = 1.0;
  for (size_t i = 2; i < verts.size(); ++i) fact *= static_cast<double>(i);
  return std::sqrt(std::max(g, 0.0)) / fact;
}

Barycentric barycentric(const std::vector<Point>& verts, const Point& x) {
  Barycentric out;
  const Eigen::Index m = static_cast<Eigen::Index>(verts.size()) - 1;
  out.coords = Eigen::VectorXd::Zero(m + 1);
  if (m == 0) {
    out.coords(0) = 1.0;
    out.residual = (x - verts[0]).norm();
    return out;
  }
  const Matrix a = edge_matrix(verts);
  const Point r = x - verts[0];
  const Eigen::VectorXd b = a.completeOrthogonalDecomposition().solve(r);
  out.coords.tail(m) = b;
  out.coords(0) = 1.0 - b.sum();
  out.residual = (a * b - r).norm();
  return out;
}

double point_simplex_distance(const std::vector<Point>& verts, const Point& x) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(verts.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Point> face;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) face.push_back(verts[i]);
    const auto bc = barycentric(face, x);
    if (bc.coords.minCoeff() >= -1e-12) best = std::min(best, bc.residual);
  }
  return best;
}

double gradient_sum(const std::vector<Point>& verts) {
  double sum = 0.0;
  const size_t m = verts.size();
  for (size_t i = 0; i < m; ++i) {
    std::vector<Point> rest;
    for (size_t j = 0; j < m; ++j)
      if (j != i) rest.push_back(verts[j]);
    sum += 1.0 / affine_span_distance(rest, verts[i]);
  }
  return sum;
}

namespace {

void lattice_rec(int slot, int remaining, std::vector<int>& c, const std::vector<Point>& verts,
                 int depth, std::vector<Point>& out) {
  const int last = static_cast<int>(verts.size()) - 1;
  if (slot == last) {
    c[slot] = remaining;
    Point p = Point::Zero(verts.front().size());
    for (size_t i = 0; i < verts.size(); ++i) p += (static_cast<double>(c[i]) / depth) * verts[i];
    out.push_back(std::move(p));
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    c[slot] = v;
    lattice_rec(slot + 1, remaining - v, c, verts, depth, out);
  }
}

}  // namespace

std::vector<Point> lattice_points(const std::vector<Point>& verts, int depth) {
  std::vector<Point> out;
  if (depth <= 0) return verts;
  std::vector<int> c(verts.size(), 0);
  lattice_rec(0, depth, c, verts, depth, out);
  return out;
}

Locator::Locator(const SimplicialComplex& k, double tol) : k_(&k), tol_(tol) {
  for (const auto& s : k.top_simplices()) {
    const auto pts = k.points(s);
    Cell c;
    c.origin = pts[0];
    c.edges = edge_matrix(pts);
    c.pinv = pts.size() > 1 ? pseudo_inverse(c.edges) : Matrix(0, pts[0].size());
    c.lo = pts[0];
    c.hi = pts[0];
    for (const auto& p : pts) {
      c.lo = c.lo.cwiseMin(p);
      c.hi = c.hi.cwiseMax(p);
    }
    c.scale = std::max((c.hi - c.lo).maxCoeff(), 1e-300);
    cells_.push_back(std::move(c));
  }
}

bool Locator::contains(int cell, const Point& x, Eigen::VectorXd* weights) const {
  const Cell& c = cells_[cell];
  const double pad = tol_ * c.scale;
  if (((x.array() < c.lo.array() - pad) || (x.array() > c.hi.array() + pad)).any()) return false;
  const Point r = x - c.origin;
  const Eigen::VectorXd b = c.pinv * r;
  const double resid = c.edges.cols() ? (c.edges * b - r).norm() : r.norm();
  if (resid > pad) return false;
  const Eigen::Index m = b.size();
  Eigen::VectorXd w(m + 1);
  w(0) = 1.0 - b.sum();
  w.tail(m) = b;
  if (w.minCoeff() < -tol_) return false;
  if (weights) *weights = std::move(w);
  return true;
}

Location Locator::locate(const Point& x) const {
  Location out;
  Eigen::VectorXd w;
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (!contains(static_cast<int>(i), x, &w)) continue;
    const Eigen::Index m = w.size() - 1;
    const Simplex& s = k_->top_simplices()[i];
    out.top = static_cast<int>(i);
    double total = 0.0;
    for (Eigen::Index j = 0; j <= m; ++j)
      if (w(j) > tol_) {
        out.carrier.push_back(s[j]);
        out.weights.push_back(w(j));
        total += w(j);
      }
    for (auto& wt : out.weights) wt /= total;
    return out;
  }
  return out;
}

}  // namespace jigglekit
