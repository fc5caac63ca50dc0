#include "jigglekit/grassmannian.hpp"

#include "jigglekit/error.hpp"

namespace jigglekit {

Plane::Plane(int ambient_dim, Matrix basis)
    : n_(ambient_dim), basis_(std::move(basis)) {
  if (basis_.rows() != n_) {
    if (basis_.size() == 0)
      basis_.resize(n_, 0);
    else
      throw Error(ErrorCode::AmbientMismatch, "basis rows differ from ambient dimension");
  }
  complement_ = orthogonal_complement(basis_);
}

Plane plane_span(const Matrix& cols, double tol) {
  const int n = static_cast<int>(cols.rows());
  if (cols.cols() == 0) return Plane(n, Matrix(n, 0));
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const int r = numerical_rank(cols, tol);
  return Plane(n, svd.matrixU().leftCols(r));
}

Plane plane_from_matrix(const Matrix& cols, double tol) {
  const int r = numerical_rank(cols, tol);
  if (r < cols.cols()) throw Error(ErrorCode::RankDeficient, "spanning vectors are dependent");
  return plane_span(cols, tol);
}

Plane plane_from_spanning(const std::vector<Point>& vectors, int ambient_dim, double tol) {
  Matrix m(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient_dim)
      throw Error(ErrorCode::AmbientMismatch, "vector length differs from ambient dimension");
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return plane_from_matrix(m, tol);
}

bool is_transverse_planes(const Plane& v, const Plane& w, double tol) {
  if (v.ambient_dim() != w.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "planes live in different ambient spaces");
  const int n = v.ambient_dim();
  Matrix cat(n, v.rank() + w.rank());
  cat << v.basis(), w.basis();
  return numerical_rank(cat, tol) == std::min(v.rank() + w.rank(), n);
}

double d_proj(const Plane& v, const Plane& w) {
  if (v.ambient_dim() != w.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "planes live in different ambient spaces");
  const Matrix diff = v.projector() - w.projector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

Matrix graph_operator(const Plane& center, const Plane& w) {
  const Matrix x = center.basis().transpose() * w.basis();
  const Matrix y = center.complement().transpose() * w.basis();
  if (x.rows() != x.cols() || smallest_singular_value(x) < 1e-9)
    throw Error(ErrorCode::OutsideChart, "plane is not a graph over the chart center");
  return y * x.inverse();
}

}  // namespace

double chart_metric(const Plane& center, const Plane& w1, const Plane& w2) {
  if (center.ambient_dim() != w1.ambient_dim() || center.ambient_dim() != w2.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "planes live in different ambient spaces");
  return operator_norm(graph_operator(center, w1) - graph_operator(center, w2));
}

Eigen::VectorXd project_along(const Plane& v, const Point& p) {
  if (p.size() != v.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "point dimension differs from plane ambient");
  return v.complement().transpose() * p;
}

std::vector<Eigen::VectorXd> project_along(const Plane& v, const std::vector<Point>& pts) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(project_along(v, p));
  return out;
}

double point_flat_distance(const Point& p, const AffineFlat& flat) {
  const Point r = p - flat.base;
  const Matrix& b = flat.direction.basis();
  return (r - b * (b.transpose() * r)).norm();
}

}  // namespace jigglekit
