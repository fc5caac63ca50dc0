#pragma once

#include <string>
#include <vector>

#include "jigglekit/complex.hpp"
#include "jigglekit/distribution.hpp"
#include "jigglekit/shape.hpp"

namespace jigglekit {

/// Linear span of the edge vectors (Gr of the simplex).
Plane tangent_plane(const std::vector<Point>& verts);

/// Transversality of a simplex to the constant foliation F(V).  For
/// dim <= n-k this is transversality of the tangent plane; above n-k it
/// holds iff some (n-k)-face is transverse, which is equivalent to the
/// tangent plane and V spanning R^n.  Throws DegenerateSimplex.
bool simplex_transverse(const std::vector<Point>& verts, const Plane& v, double tol = kRankTol);

/// pi_V(p) lies outside pi_V(ASpan(D)).
bool projection_criterion_quotient(const Point& p, const std::vector<Point>& verts,
                                   const Plane& v, double tol = kRankTol);
/// pi_D(p) lies outside pi_D(V), projecting along the tangent plane of D.
bool projection_criterion_dual(const Point& p, const std::vector<Point>& verts, const Plane& v,
                               double tol = kRankTol);
/// Transversality of the join <p, D> to F(V) via the projection criteria.
/// Throws PreconditionViolated unless D is transverse and dim D + 1 <= n-k.
bool join_transverse_by_projection(const Point& p, const std::vector<Point>& verts,
                                   const Plane& v, double tol = kRankTol);

struct SemitransWitness {
  double delta = 0.0;
  /// Unit vector in V^perp (ambient coordinates) from p towards the nearest
  /// point of the projected flat; zero when delta = 0.
  Point direction;
};
/// Distance from pi_V(p) to pi_V(ASpan(D)).  Throws PreconditionViolated.
double semitrans_margin(const Point& p, const std::vector<Point>& verts, const Plane& v);
SemitransWitness semitrans_witness(const Point& p, const std::vector<Point>& verts,
                                   const Plane& v);

/// Certified lower bound on the d_proj radius around Gr(D) of planes that
/// stay transverse to V: the smallest singular value of V projected onto
/// Gr(D)^perp (dual form when dim D + k > n).  Throws NotTransverse.
double eps_margin(const std::vector<Point>& verts, const Plane& v);
double eps_margin_planes(const Plane& w, const Plane& v);

/// All faces of the simplex transverse to F(V).
bool stratified_transverse(const std::vector<Point>& verts, const Plane& v,
                           double tol = kRankTol);
/// All faces of all image simplices of (K, images) transverse to F(V).
bool stratified_transverse(const SimplicialComplex& k, const std::vector<Point>& images,
                           const Plane& v, double tol = kRankTol);

struct GeneralPositionResult {
  bool ok = false;
  double margin = 0.0;  // min eps_margin over (face, sample) pairs; 0 when !ok
};
/// Every face of dimension >= 1 transverse to xi_x at every lattice sample x
/// of the simplex (single sample for constant xi).  Throws DegenerateSimplex.
GeneralPositionResult general_position(const std::vector<Point>& verts, const Distribution& xi,
                                       int sample_depth = 3);

/// Largest d_proj(xi_x, xi_y) over sample pairs with |x - y| <= r.
double oscillation(const Distribution& xi, const std::vector<Point>& region, double r);

enum class TransferKind { FolChange, SimplexChange, Zeta, EpsFromZeta };
struct TransferInput {
  double gamma = 0.0;
  double beta = 0.0;
  double r = 0.0;
  ShapeStats shape;
  double delta = 0.0;  // semitransversality margin (Zeta), or zeta (EpsFromZeta)
  double c = 1.0;
};
/// FolChange: gamma - beta r.  SimplexChange: gamma - 2 beta r.
/// Zeta: C min{delta, rmin, delta / (Lambda rmax)}.  EpsFromZeta: C zeta / rmax.
/// Clamped at 0.
double transfer_margins(TransferKind kind, const TransferInput& in);

enum class Notion { Transverse, Stratified, GeneralPosition, Report };

struct SimplexRecord {
  Simplex simplex;
  int dim = 0;
  double semitrans_margin = 0.0;
  double eps_margin = 0.0;
  bool degenerate = false;
  bool transverse = false;
  bool stratified = false;
  bool general_position = false;
  bool certified = false;
};

struct TransversalityReport {
  static constexpr int kSchemaVersion = 1;
  Notion notion = Notion::Report;
  std::vector<SimplexRecord> records;
  double min_semitrans = 0.0;
  double min_eps = 0.0;
  bool pass = false;
  bool sampled = true;
  bool certified = false;
  int level = 0;
};

struct ReportOptions {
  Notion notion = Notion::Report;
  int sample_depth = 3;
  double margin_tol = 1e-12;
  /// Where xi is evaluated for the semitransversality record of a face
  /// (defaults to the image of the face's last vertex).
  const std::vector<Point>* anchors = nullptr;
  /// Processing rank of each vertex; the face's last vertex is the one of
  /// highest rank (defaults to the global order).
  const std::vector<int>* order_rank = nullptr;
  /// Restrict the report to these maximal simplices (all when empty).
  std::vector<int> only_tops;
};

/// Per-top-simplex report for the image complex (K, images) against xi.
TransversalityReport build_report(const SimplicialComplex& k, const std::vector<Point>& images,
                                  const Distribution& xi, const ReportOptions& opt = {});

std::string to_string(Notion n);

}  // namespace jigglekit
