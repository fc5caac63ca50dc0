#pragma once

#include <vector>

#include "jigglekit/linalg.hpp"

namespace jigglekit {

/// Linear k-plane in R^n with an orthonormal basis (n x k).
class Plane {
 public:
  Plane() = default;
  /// Basis columns must already be orthonormal.
  Plane(int ambient_dim, Matrix basis);

  int ambient_dim() const { return n_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  Matrix projector() const { return basis_ * basis_.transpose(); }
  /// Orthonormal basis of the orthogonal complement (deterministic).
  const Matrix& complement() const { return complement_; }

 private:
  int n_ = 0;
  Matrix basis_;
  Matrix complement_;
};

struct AffineFlat {
  Point base;
  Plane direction;
};

/// Orthonormal basis of the span; throws RankDeficient if the vectors are
/// dependent at relative tolerance tol.
Plane plane_from_spanning(const std::vector<Point>& vectors, int ambient_dim,
                          double tol = kRankTol);
Plane plane_from_matrix(const Matrix& cols, double tol = kRankTol);
/// Span of the columns; dependent columns are allowed.
Plane plane_span(const Matrix& cols, double tol = kRankTol);

/// dim(V + W) = min(v + w, n) at the given relative tolerance.
bool is_transverse_planes(const Plane& v, const Plane& w, double tol = kRankTol);

/// Operator norm of the difference of orthogonal projectors.
double d_proj(const Plane& v, const Plane& w);

/// Operator norm of T_{W1} - T_{W2} where W = graph(T_W : V -> V^perp).
/// Throws OutsideChart.
double chart_metric(const Plane& center, const Plane& w1, const Plane& w2);

/// Coordinates of the points in V^perp (columns of the complement basis).
Eigen::VectorXd project_along(const Plane& v, const Point& p);
std::vector<Eigen::VectorXd> project_along(const Plane& v, const std::vector<Point>& pts);

double point_flat_distance(const Point& p, const AffineFlat& flat);

}  // namespace jigglekit
