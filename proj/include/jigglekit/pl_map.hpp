#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "jigglekit/complex.hpp"
#include "jigglekit/shape.hpp"
#include "jigglekit/subdivision.hpp"

namespace jigglekit {

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

/// A map |K| -> R^n that can be evaluated on each maximal simplex of its
/// domain complex.
class PiecewiseMap {
 public:
  virtual ~PiecewiseMap() = default;
  virtual const SimplicialComplex& domain() const = 0;
  virtual int target_dim() const = 0;
  /// Value at x, which lies in maximal simplex `cell` of domain().
  virtual Point value(const Point& x, int cell) const = 0;
  /// Derivative along the orthonormal tangent basis (N x m): an n x m matrix.
  virtual Matrix derivative(const Point& x, int cell, const Matrix& tangent) const = 0;
};

/// Affine on each simplex, determined by vertex images.
class PLMap : public PiecewiseMap {
 public:
  PLMap(ComplexPtr domain, std::vector<Point> images);

  const SimplicialComplex& domain() const override { return *domain_; }
  const ComplexPtr& domain_ptr() const { return domain_; }
  int target_dim() const override { return target_dim_; }
  const std::vector<Point>& images() const { return images_; }
  const Point& image(int v) const { return images_[v]; }
  std::vector<Point> image_points(const Simplex& s) const;
  Point value(const Point& x, int cell) const override;
  Matrix derivative(const Point& x, int cell, const Matrix& tangent) const override;
  /// Ambient derivative n x N of the affine piece on `cell`.
  const Matrix& jacobian(int cell) const { return jac_[cell]; }

 private:
  ComplexPtr domain_;
  std::vector<Point> images_;
  int target_dim_ = 0;
  std::vector<Matrix> jac_;  // n x N per maximal simplex
};

/// Black-box map with optional analytic derivative (n x N ambient Jacobian).
class SampledMap : public PiecewiseMap {
 public:
  using Eval = std::function<Point(const Point&)>;
  using Jac = std::function<Matrix(const Point&)>;
  SampledMap(ComplexPtr domain, int target_dim, Eval f, Jac df = nullptr);

  const SimplicialComplex& domain() const override { return *domain_; }
  int target_dim() const override { return target_dim_; }
  Point value(const Point& x, int) const override { return f_(x); }
  Matrix derivative(const Point& x, int cell, const Matrix& tangent) const override;
  const Eval& eval() const { return f_; }

 private:
  ComplexPtr domain_;
  int target_dim_;
  Eval f_;
  Jac df_;
  std::vector<double> fd_step_;  // 1e-6 rmax per maximal simplex
};

/// PL inside |K'| (on the subdivided complex), f away from it, blended on
/// the simplices touching K' by the join parameter
/// t(x) = sum of barycentric weights of vertices in K'.
class HybridMap : public PiecewiseMap {
 public:
  HybridMap(std::shared_ptr<const PLMap> linear, std::shared_ptr<const PiecewiseMap> f,
            std::vector<bool> in_sub);
  const SimplicialComplex& domain() const override { return linear_->domain(); }
  int target_dim() const override { return linear_->target_dim(); }
  Point value(const Point& x, int cell) const override;
  Matrix derivative(const Point& x, int cell, const Matrix& tangent) const override;

 private:
  double join_parameter(const Point& x, int cell, Eigen::VectorXd* grad_tangent,
                        const Matrix* tangent) const;
  std::shared_ptr<const PLMap> linear_;
  std::shared_ptr<const PiecewiseMap> f_;
  std::unique_ptr<Locator> f_locator_;
  std::vector<bool> in_sub_;
};

/// Evaluates f at an arbitrary point of its domain (point location).
Point evaluate(const PiecewiseMap& f, const Point& x);

/// PL map on K_l agreeing with f at the vertices.
std::shared_ptr<PLMap> linearize(const PiecewiseMap& f, int levels);
/// Same, on an already computed subdivision of f's domain.
std::shared_ptr<PLMap> linearize_on(const PiecewiseMap& f, const Subdivided& sub);
/// Linearization over |K'| only, equal to f outside the union of simplices
/// of K_l touching K'.  Throws CollarTooSmall when that union reaches
/// further than `collar` from |K'|.
std::shared_ptr<HybridMap> linearize_relative(std::shared_ptr<const PiecewiseMap> f, int levels,
                                              const SimplexSet& restrict_to, double collar);

struct MapDistance {
  double c0 = 0.0;
  double c1 = 0.0;
};
/// Sampled C0 and C1 distances over the finer of the two domain complexes
/// (which must subdivide the other).  Throws DomainMismatch.
MapDistance distances(const PiecewiseMap& f, const PiecewiseMap& g, int sample_depth = 3);
double distance(const PiecewiseMap& f, const PiecewiseMap& g, int order, int sample_depth = 3);

using PointMap = std::function<Point(const Point&)>;

/// Blend t s_A + (1 - t) s_B with t the join parameter (1 on A, 0 on B).
/// Faces are index lists into `delta`.  Throws NotOpposingFaces.
PointMap interpolate(const std::vector<Point>& delta, const std::vector<int>& face_a,
                     const std::vector<int>& face_b, PointMap s_a, PointMap s_b);

/// The affine map on delta that restricts to s_A on A and s_B on B
/// (vertex images of the result).  Throws NotOpposingFaces.
std::vector<Point> join_map(const std::vector<Point>& delta, const std::vector<int>& face_a,
                            const std::vector<int>& face_b, const PointMap& s_a,
                            const PointMap& s_b);

/// Affine extension of vertex images over a simplex.
Point affine_eval(const std::vector<Point>& delta, const std::vector<Point>& images,
                  const Point& x);

struct JigglingCheck {
  bool ok = false;
  bool subdivides = false;
  double c0 = 0.0;
  double c1 = 0.0;
};
/// K' subdivides K (every maximal simplex of K' inside one of K, equal total
/// volume) and d_C1(f, g) < eps.
JigglingCheck verify_jiggling(const PiecewiseMap& f, const PiecewiseMap& g, double eps);

/// True when `fine` subdivides `coarse`: each maximal simplex of fine lies in
/// a maximal simplex of coarse and the total volumes agree.
bool subdivides(const SimplicialComplex& fine, const SimplicialComplex& coarse);

/// Non-degenerate images and injectivity on |K| (pairwise intersection
/// test of image simplices against their shared faces).
bool is_piecewise_embedding(const PLMap& f, double tol = kDegeneracyTol);

}  // namespace jigglekit
