#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace jigglekit {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default relative rank tolerance: singular values below rank_tol * sigma_max vanish.
inline constexpr double kRankTol = 1e-9;
/// A simplex is degenerate when rmin < kDegeneracyTol * rmax.
inline constexpr double kDegeneracyTol = 1e-12;

/// Numerical rank with a tolerance relative to the largest singular value.
int numerical_rank(const Matrix& a, double rel_tol = kRankTol);

/// Columns spanning the orthogonal complement of the column space of `q`
/// (q must have orthonormal columns).  Deterministic: built greedily from
/// the standard basis.
Matrix orthogonal_complement(const Matrix& q);

/// Moore-Penrose pseudo-inverse via SVD with relative cutoff.
Matrix pseudo_inverse(const Matrix& a, double rel_tol = kRankTol);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// Smallest singular value among min(rows, cols); 0 for empty input.
double smallest_singular_value(const Matrix& a);

/// Matrix with the given points as columns.
Matrix columns(const std::vector<Point>& pts);

/// Edge matrix [v_1 - v_0, ..., v_m - v_0].
Matrix edge_matrix(const std::vector<Point>& verts);

/// Dense LP: maximize c.x subject to a_eq x = b_eq, x >= 0.  Two-phase
/// simplex with Bland's rule; intended for the tiny problems arising from
/// simplex-pair intersection tests.  Returns nullopt when infeasible or when
/// the final basis fails the feasibility residual check.
std::optional<double> lp_maximize(const Eigen::VectorXd& c, const Matrix& a_eq,
                                  const Eigen::VectorXd& b_eq);

/// Largest total weight the pair (sigma, tau) can put on vertices outside
/// `shared` at a common point.  Zero means sigma and tau meet inside the
/// common face conv(shared) (or not at all when `disjoint` is set).
struct IntersectionProbe {
  bool intersect = false;
  double excess = 0.0;  // weight on non-shared vertices; > 0 means a bad overlap
};
IntersectionProbe probe_intersection(const std::vector<Point>& sigma,
                                     const std::vector<Point>& tau,
                                     const std::vector<std::pair<int, int>>& shared);

}  // namespace jigglekit
