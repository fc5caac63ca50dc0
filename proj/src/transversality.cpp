#include "jigglekit/transversality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jigglekit/error.hpp"

namespace jigglekit {

namespace {

std::vector<Point> pick(const std::vector<Point>& pts, const std::vector<int>& idx) {
  std::vector<Point> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(pts[i]);
  return out;
}

// Local index lists of all faces of dimension >= min_dim.
std::vector<std::vector<int>> local_faces(int count, int min_dim) {
  Simplex all(count);
  for (int i = 0; i < count; ++i) all[i] = i;
  std::vector<std::vector<int>> out;
  for (auto& f : faces_of(all))
    if (static_cast<int>(f.size()) - 1 >= min_dim) out.push_back(std::move(f));
  return out;
}

double config_scale(const Point& p, const std::vector<Point>& verts) {
  double s = (p - verts[0]).norm();
  for (const auto& v : verts) s = std::max(s, (v - verts[0]).norm());
  return s > 0 ? s : 1.0;
}

// Nearest point of the affine span of pts (coordinates in the same space).
Eigen::VectorXd nearest_on_span(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& x) {
  if (pts.size() == 1) return pts[0];
  Matrix e(pts[0].size(), static_cast<Eigen::Index>(pts.size()) - 1);
  for (size_t i = 1; i < pts.size(); ++i) e.col(static_cast<Eigen::Index>(i) - 1) = pts[i] - pts[0];
  const Eigen::VectorXd c = e.completeOrthogonalDecomposition().solve(x - pts[0]);
  return pts[0] + e * c;
}

void check_join_preconditions(const std::vector<Point>& verts, const Plane& v) {
  const int d = static_cast<int>(verts.size()) - 1;
  const int n = v.ambient_dim();
  if (d + 1 > n - v.rank())
    throw Error(ErrorCode::PreconditionViolated, "join dimension exceeds n - k");
  if (d >= 1 && !simplex_transverse(verts, v))
    throw Error(ErrorCode::PreconditionViolated, "base simplex not transverse");
}

}  // namespace

Plane tangent_plane(const std::vector<Point>& verts) {
  return plane_span(edge_matrix(verts));
}

bool simplex_transverse(const std::vector<Point>& verts, const Plane& v, double tol) {
  if (!verts.empty() && verts.front().size() != v.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "simplex and plane ambient dims differ");
  if (is_degenerate(verts)) throw Error(ErrorCode::DegenerateSimplex, "degenerate simplex");
  if (verts.size() == 1) return true;
  return is_transverse_planes(tangent_plane(verts), v, tol);
}

bool projection_criterion_quotient(const Point& p, const std::vector<Point>& verts,
                                   const Plane& v, double tol) {
  const auto pp = project_along(v, p);
  const auto pv = project_along(v, verts);
  const double dist = (nearest_on_span(pv, pp) - pp).norm();
  return dist > tol * config_scale(p, verts);
}

bool projection_criterion_dual(const Point& p, const std::vector<Point>& verts, const Plane& v,
                               double tol) {
  const Plane w = tangent_plane(verts);
  const Matrix& c = w.complement();
  const Eigen::VectorXd x = c.transpose() * (p - verts[0]);
  const Plane s = plane_span(c.transpose() * v.basis());
  const Eigen::VectorXd r = x - s.basis() * (s.basis().transpose() * x);
  return r.norm() > tol * config_scale(p, verts);
}

bool join_transverse_by_projection(const Point& p, const std::vector<Point>& verts,
                                   const Plane& v, double tol) {
  check_join_preconditions(verts, v);
  const bool a = projection_criterion_quotient(p, verts, v, tol);
  const bool b = projection_criterion_dual(p, verts, v, tol);
  if (a == b) return a;
  // borderline: defer to the rank definition
  std::vector<Point> join = verts;
  join.insert(join.begin(), p);
  if (is_degenerate(join)) return false;
  return simplex_transverse(join, v, tol);
}

SemitransWitness semitrans_witness(const Point& p, const std::vector<Point>& verts,
                                   const Plane& v) {
  check_join_preconditions(verts, v);
  const auto pp = project_along(v, p);
  const auto pv = project_along(v, verts);
  const Eigen::VectorXd diff = nearest_on_span(pv, pp) - pp;
  SemitransWitness w;
  w.delta = diff.norm();
  w.direction = Point::Zero(p.size());
  if (w.delta > 0) w.direction = v.complement() * (diff / w.delta);
  return w;
}

double semitrans_margin(const Point& p, const std::vector<Point>& verts, const Plane& v) {
  return semitrans_witness(p, verts, v).delta;
}

double eps_margin_planes(const Plane& w, const Plane& v) {
  if (w.ambient_dim() != v.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "planes live in different ambient spaces");
  const int n = v.ambient_dim();
  const int d = w.rank();
  const int k = v.rank();
  if (k == 0 || d == 0) return 1.0;
  double s;
  if (d + k <= n)
    s = smallest_singular_value(w.complement().transpose() * v.basis());
  else
    s = smallest_singular_value(w.basis().transpose() * v.complement());
  if (!(s > kRankTol)) throw Error(ErrorCode::NotTransverse, "plane not transverse");
  return std::min(s, 1.0);
}

double eps_margin(const std::vector<Point>& verts, const Plane& v) {
  if (is_degenerate(verts)) throw Error(ErrorCode::DegenerateSimplex, "degenerate simplex");
  return eps_margin_planes(tangent_plane(verts), v);
}

bool stratified_transverse(const std::vector<Point>& verts, const Plane& v, double tol) {
  if (is_degenerate(verts)) throw Error(ErrorCode::DegenerateSimplex, "degenerate simplex");
  for (const auto& f : local_faces(static_cast<int>(verts.size()), 1))
    if (!simplex_transverse(pick(verts, f), v, tol)) return false;
  return true;
}

bool stratified_transverse(const SimplicialComplex& k, const std::vector<Point>& images,
                           const Plane& v, double tol) {
  for (const auto& s : k.top_simplices()) {
    std::vector<Point> pts;
    for (int i : s) pts.push_back(images[i]);
    if (!stratified_transverse(pts, v, tol)) return false;
  }
  return true;
}

GeneralPositionResult general_position(const std::vector<Point>& verts, const Distribution& xi,
                                       int sample_depth) {
  if (is_degenerate(verts)) throw Error(ErrorCode::DegenerateSimplex, "degenerate simplex");
  std::vector<Plane> planes;
  if (xi.is_constant()) {
    planes.push_back(xi.at(verts[0]));
  } else {
    for (const auto& x : lattice_points(verts, sample_depth)) planes.push_back(xi.at(x));
  }
  GeneralPositionResult out;
  out.ok = true;
  out.margin = std::numeric_limits<double>::infinity();
  for (const auto& f : local_faces(static_cast<int>(verts.size()), 1)) {
    const Plane w = tangent_plane(pick(verts, f));
    for (const auto& v : planes) {
      if (!is_transverse_planes(w, v)) {
        out.ok = false;
        out.margin = 0.0;
        return out;
      }
      double m = 0.0;
      try {
        m = eps_margin_planes(w, v);
      } catch (const Error&) {
        m = 0.0;
      }
      out.margin = std::min(out.margin, m);
    }
  }
  if (!std::isfinite(out.margin)) out.margin = 1.0;  // 0-simplex
  return out;
}

double oscillation(const Distribution& xi, const std::vector<Point>& region, double r) {
  if (xi.is_constant() || region.size() < 2) return 0.0;
  std::vector<Plane> planes;
  planes.reserve(region.size());
  for (const auto& x : region) planes.push_back(xi.at(x));
  double beta = 0.0;
  for (size_t i = 0; i < region.size(); ++i)
    for (size_t j = i + 1; j < region.size(); ++j)
      if ((region[i] - region[j]).norm() <= r) beta = std::max(beta, d_proj(planes[i], planes[j]));
  return beta;
}

double transfer_margins(TransferKind kind, const TransferInput& in) {
  double v = 0.0;
  switch (kind) {
    case TransferKind::FolChange:
      v = in.gamma - in.beta * in.r;
      break;
    case TransferKind::SimplexChange:
      v = in.gamma - 2.0 * in.beta * in.r;
      break;
    case TransferKind::Zeta: {
      const double lr = in.shape.lambda * in.shape.rmax;
      const double third = lr > 0 ? in.delta / lr : std::numeric_limits<double>::infinity();
      v = in.c * std::min({in.delta, in.shape.rmin, third});
      break;
    }
    case TransferKind::EpsFromZeta:
      v = in.shape.rmax > 0 ? in.c * in.delta / in.shape.rmax : 0.0;
      break;
  }
  return std::max(v, 0.0);
}

std::string to_string(Notion n) {
  switch (n) {
    case Notion::Transverse: return "transverse";
    case Notion::Stratified: return "stratified";
    case Notion::GeneralPosition: return "general-position";
    case Notion::Report: return "report";
  }
  return "report";
}

namespace {

bool face_transverse_sampled(const std::vector<Point>& pts, const Distribution& xi, int depth) {
  if (pts.size() == 1) return true;
  const Plane w = tangent_plane(pts);
  if (xi.is_constant()) return is_transverse_planes(w, xi.at(pts[0]));
  for (const auto& x : lattice_points(pts, depth))
    if (!is_transverse_planes(w, xi.at(x))) return false;
  return true;
}

}  // namespace

TransversalityReport build_report(const SimplicialComplex& k, const std::vector<Point>& images,
                                  const Distribution& xi, const ReportOptions& opt) {
  TransversalityReport rep;
  rep.notion = opt.notion;
  rep.min_semitrans = std::numeric_limits<double>::infinity();
  rep.min_eps = std::numeric_limits<double>::infinity();
  const int n = xi.ambient_dim();
  const int codim = n - xi.rank();
  std::vector<int> tops = opt.only_tops;
  if (tops.empty())
    for (int i = 0; i < static_cast<int>(k.top_simplices().size()); ++i) tops.push_back(i);
  rep.certified = true;
  bool all_flags = true;
  for (int t : tops) {
    const Simplex& s = k.top_simplices()[t];
    SimplexRecord rec;
    rec.simplex = s;
    rec.dim = static_cast<int>(s.size()) - 1;
    std::vector<Point> pts;
    for (int v : s) pts.push_back(images[v]);
    if (rec.dim == 0) {
      rec.transverse = rec.stratified = rec.general_position = rec.certified = true;
      rec.eps_margin = 1.0;
      rep.records.push_back(std::move(rec));
      continue;
    }
    rec.degenerate = is_degenerate(pts);
    if (!rec.degenerate) {
      rec.transverse = face_transverse_sampled(pts, xi, opt.sample_depth);
      rec.stratified = true;
      for (const auto& f : local_faces(static_cast<int>(pts.size()), 1))
        if (!face_transverse_sampled(pick(pts, f), xi, opt.sample_depth)) {
          rec.stratified = false;
          break;
        }
      const auto gp = general_position(pts, xi, opt.sample_depth);
      rec.general_position = gp.ok;
      rec.eps_margin = gp.ok ? gp.margin : 0.0;

      // semitransversality of each face in its last-processed vertex
      double delta = std::numeric_limits<double>::infinity();
      for (const auto& f : local_faces(static_cast<int>(pts.size()), 1)) {
        if (static_cast<int>(f.size()) - 1 > codim) continue;
        int last = f.front();
        for (int i : f) {
          const int ri = opt.order_rank ? (*opt.order_rank)[s[i]] : s[i];
          const int rl = opt.order_rank ? (*opt.order_rank)[s[last]] : s[last];
          if (ri > rl) last = i;
        }
        std::vector<Point> rest;
        for (int i : f)
          if (i != last) rest.push_back(pts[i]);
        const Point& anchor = opt.anchors ? (*opt.anchors)[s[last]] : pts[last];
        const Plane v = xi.at(anchor);
        double m = 0.0;
        if (rest.size() == 1 || simplex_transverse(rest, v)) m = semitrans_margin(pts[last], rest, v);
        delta = std::min(delta, m);
      }
      rec.semitrans_margin = std::isfinite(delta) ? delta : 0.0;
      if (xi.is_constant()) {
        rec.certified = rec.general_position;
      } else {
        const double rmax = raw_shape_stats(pts).rmax;
        const double beta = oscillation(xi, lattice_points(pts, opt.sample_depth), rmax);
        rec.certified = rec.general_position && rec.semitrans_margin - beta * rmax > 0.0;
      }
    }
    bool flag = false;
    switch (opt.notion) {
      case Notion::Transverse: flag = rec.transverse; break;
      case Notion::Stratified: flag = rec.stratified; break;
      default: flag = rec.general_position; break;
    }
    all_flags = all_flags && flag;
    rep.certified = rep.certified && rec.certified;
    rep.min_semitrans = std::min(rep.min_semitrans, rec.semitrans_margin);
    rep.min_eps = std::min(rep.min_eps, rec.eps_margin);
    rep.records.push_back(std::move(rec));
  }
  if (!std::isfinite(rep.min_semitrans)) rep.min_semitrans = 0.0;
  if (!std::isfinite(rep.min_eps)) rep.min_eps = 0.0;
  const bool needs_margin = opt.notion == Notion::GeneralPosition || opt.notion == Notion::Report;
  rep.pass = all_flags && (!needs_margin || tops.empty() || rep.min_eps > opt.margin_tol);
  rep.certified = rep.certified && rep.pass;
  return rep;
}

}  // namespace jigglekit
