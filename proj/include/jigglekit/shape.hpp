#pragma once

#include <vector>

#include "jigglekit/complex.hpp"

namespace jigglekit {

struct ShapeStats {
  double rmin = 0.0;
  double rmax = 0.0;
  double lambda = 0.0;
};

/// rmin: smallest vertex-to-opposite-face distance (affine spans);
/// rmax: largest vertex distance; lambda: largest row norm of pinv([v_i - v_0]).
/// A 0-simplex gets rmin = rmax = 0, lambda = 0.  Throws DegenerateSimplex.
ShapeStats shape_stats(const std::vector<Point>& verts);
ShapeStats shape_stats(const Simplex& s, const SimplicialComplex& k);

/// Shape statistics without the degeneracy check.
ShapeStats raw_shape_stats(const std::vector<Point>& verts);

bool is_degenerate(const std::vector<Point>& verts, double tol = kDegeneracyTol);

/// Unsigned m-dimensional volume.
double simplex_volume(const std::vector<Point>& verts);

/// Barycentric coordinates of the point in the affine span closest to x,
/// together with the residual distance to that span.
struct Barycentric {
  Eigen::VectorXd coords;
  double residual = 0.0;
};
Barycentric barycentric(const std::vector<Point>& verts, const Point& x);

/// Euclidean distance from x to the affine span of the points.
double affine_span_distance(const std::vector<Point>& verts, const Point& x);

/// Exact distance from x to the convex hull of a non-degenerate simplex
/// (enumerates faces).
double point_simplex_distance(const std::vector<Point>& verts, const Point& x);

/// Sum over vertices of the norm of the barycentric-coordinate gradient
/// (= sum of reciprocal heights).  Bounds the derivative change of an affine
/// map when vertex images move by at most 1.
double gradient_sum(const std::vector<Point>& verts);

/// Points with barycentric coordinates c/depth, c integral and summing to depth.
/// depth <= 0 yields the vertices.
std::vector<Point> lattice_points(const std::vector<Point>& verts, int depth);

struct Location {
  int top = -1;              // index into top_simplices()
  Simplex carrier;           // minimal face containing the point
  std::vector<double> weights;  // barycentric weights on the carrier's vertices
};
/// Point location in |K| by scanning maximal simplices with cached
/// pseudo-inverses.  Tolerances are relative to each simplex's size.
class Locator {
 public:
  explicit Locator(const SimplicialComplex& k, double tol = 1e-9);
  /// top = -1 when x lies outside |K|.
  Location locate(const Point& x) const;
  /// Barycentric coordinates of x with respect to maximal simplex `cell`
  /// and whether x lies in it (within tolerance).
  bool contains(int cell, const Point& x, Eigen::VectorXd* weights = nullptr) const;

 private:
  struct Cell {
    Point origin;
    Matrix pinv;
    Matrix edges;
    Point lo, hi;
    double scale;
  };
  const SimplicialComplex* k_;
  double tol_;
  std::vector<Cell> cells_;
};

}  // namespace jigglekit
