#include "jigglekit/pl_map.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "jigglekit/error.hpp"
#include "jigglekit/transversality.hpp"

namespace jigglekit {

PLMap::PLMap(ComplexPtr domain, std::vector<Point> images)
    : domain_(std::move(domain)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != domain_->num_vertices())
    throw Error(ErrorCode::ValidationError, "one image per domain vertex required");
  target_dim_ = images_.empty() ? 0 : static_cast<int>(images_.front().size());
  for (const auto& p : images_)
    if (p.size() != target_dim_ || !p.allFinite())
      throw Error(ErrorCode::ValidationError, "images must be finite and of equal dimension");
  const int n_dom = domain_->ambient_dim();
  for (const auto& s : domain_->top_simplices()) {
    if (s.size() == 1) {
      jac_.push_back(Matrix::Zero(target_dim_, n_dom));
      continue;
    }
    const Matrix a = edge_matrix(domain_->points(s));
    const Matrix y = edge_matrix(image_points(s));
    jac_.push_back(y * pseudo_inverse(a));
  }
}

std::vector<Point> PLMap::image_points(const Simplex& s) const {
  std::vector<Point> out;
  out.reserve(s.size());
  for (int v : s) out.push_back(images_[v]);
  return out;
}

Point PLMap::value(const Point& x, int cell) const {
  const Simplex& s = domain_->top_simplices()[cell];
  return images_[s[0]] + jac_[cell] * (x - domain_->vertex(s[0]));
}

Matrix PLMap::derivative(const Point&, int cell, const Matrix& tangent) const {
  return jac_[cell] * tangent;
}

SampledMap::SampledMap(ComplexPtr domain, int target_dim, Eval f, Jac df)
    : domain_(std::move(domain)), target_dim_(target_dim), f_(std::move(f)), df_(std::move(df)) {
  for (const auto& s : domain_->top_simplices())
    fd_step_.push_back(1e-6 * std::max(raw_shape_stats(domain_->points(s)).rmax, 1e-300));
}

Matrix SampledMap::derivative(const Point& x, int cell, const Matrix& tangent) const {
  if (df_) return df_(x) * tangent;
  const double h = fd_step_[cell];
  Matrix d(target_dim_, tangent.cols());
  for (Eigen::Index j = 0; j < tangent.cols(); ++j)
    d.col(j) = (f_(x + h * tangent.col(j)) - f_(x - h * tangent.col(j))) / (2.0 * h);
  return d;
}

HybridMap::HybridMap(std::shared_ptr<const PLMap> linear, std::shared_ptr<const PiecewiseMap> f,
                     std::vector<bool> in_sub)
    : linear_(std::move(linear)), f_(std::move(f)), in_sub_(std::move(in_sub)) {
  f_locator_ = std::make_unique<Locator>(f_->domain());
}

double HybridMap::join_parameter(const Point& x, int cell, Eigen::VectorXd* grad,
                                 const Matrix* tangent) const {
  const Simplex& s = domain().top_simplices()[cell];
  const auto pts = domain().points(s);
  const auto bc = barycentric(pts, x);
  double t = 0.0;
  for (size_t i = 0; i < s.size(); ++i)
    if (in_sub_[s[i]]) t += bc.coords(static_cast<Eigen::Index>(i));
  if (grad && tangent) {
    // gradient of an affine function along the tangent basis
    const Matrix pinv = pseudo_inverse(edge_matrix(pts));
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(pts[0].size());
    for (size_t i = 1; i < s.size(); ++i) {
      const double coef = (in_sub_[s[i]] ? 1.0 : 0.0) - (in_sub_[s[0]] ? 1.0 : 0.0);
      g += coef * pinv.row(static_cast<Eigen::Index>(i) - 1);
    }
    *grad = (g * *tangent).transpose();
  }
  return std::clamp(t, 0.0, 1.0);
}

namespace {

int locate_cell(const Locator& loc, const Point& x) {
  const auto l = loc.locate(x);
  if (l.top < 0) throw Error(ErrorCode::DomainMismatch, "point outside the map's domain");
  return l.top;
}

}  // namespace

Point HybridMap::value(const Point& x, int cell) const {
  const double t = join_parameter(x, cell, nullptr, nullptr);
  if (t == 1.0) return linear_->value(x, cell);
  const Point fx = f_->value(x, locate_cell(*f_locator_, x));
  if (t == 0.0) return fx;
  return t * linear_->value(x, cell) + (1.0 - t) * fx;
}

Matrix HybridMap::derivative(const Point& x, int cell, const Matrix& tangent) const {
  Eigen::VectorXd grad;
  const double t = join_parameter(x, cell, &grad, &tangent);
  const Matrix dl = linear_->derivative(x, cell, tangent);
  bool touches = false;
  for (int v : domain().top_simplices()[cell]) touches = touches || in_sub_[v];
  if (!touches) {
    return f_->derivative(x, locate_cell(*f_locator_, x), tangent);
  }
  const int fc = locate_cell(*f_locator_, x);
  const Matrix df = f_->derivative(x, fc, tangent);
  const Point diff = linear_->value(x, cell) - f_->value(x, fc);
  return t * dl + (1.0 - t) * df + diff * grad.transpose();
}

Point evaluate(const PiecewiseMap& f, const Point& x) {
  const Locator loc(f.domain());
  return f.value(x, locate_cell(loc, x));
}

namespace {

int cell_for_vertex(const SimplicialComplex& k, const std::vector<std::pair<int, double>>& w) {
  std::set<int> support;
  for (const auto& [v, t] : w)
    if (t != 0.0) support.insert(v);
  for (int c : k.tops_at(*support.begin())) {
    const Simplex& s = k.top_simplices()[c];
    if (std::includes(s.begin(), s.end(), support.begin(), support.end())) return c;
  }
  throw Error(ErrorCode::DomainMismatch, "subdivision vertex has no parent cell");
}

}  // namespace

std::shared_ptr<PLMap> linearize_on(const PiecewiseMap& f, const Subdivided& sub) {
  std::vector<Point> images;
  images.reserve(static_cast<size_t>(sub.complex.num_vertices()));
  const auto* pl = dynamic_cast<const PLMap*>(&f);
  for (int v = 0; v < sub.complex.num_vertices(); ++v) {
    const auto& w = sub.map.vertex_weights[v];
    if (pl) {
      // weights of a PL source combine its vertex images exactly
      if (w.size() == 1) {
        images.push_back(pl->image(w[0].first));
        continue;
      }
      Point y = Point::Zero(pl->target_dim());
      for (const auto& [u, c] : w) y += c * pl->image(u);
      images.push_back(std::move(y));
      continue;
    }
    const int c = cell_for_vertex(f.domain(), w);
    images.push_back(f.value(sub.complex.vertex(v), c));
  }
  return std::make_shared<PLMap>(std::make_shared<SimplicialComplex>(sub.complex),
                                 std::move(images));
}

std::shared_ptr<PLMap> linearize(const PiecewiseMap& f, int levels) {
  return linearize_on(f, crystalline_subdivide(f.domain(), levels));
}

std::shared_ptr<HybridMap> linearize_relative(std::shared_ptr<const PiecewiseMap> f, int levels,
                                              const SimplexSet& restrict_to, double collar) {
  const Subdivided sub = crystalline_subdivide(f->domain(), levels);
  const SimplexSet fine = restrict_subcomplex(sub, restrict_to);
  std::vector<bool> in_sub(static_cast<size_t>(sub.complex.num_vertices()), false);
  for (const auto& s : fine)
    if (s.size() == 1) in_sub[s[0]] = true;
  for (const auto& s : sub.complex.top_simplices()) {
    bool touches = false;
    for (int v : s) touches = touches || in_sub[v];
    if (!touches) continue;
    if (raw_shape_stats(sub.complex.points(s)).rmax > collar)
      throw Error(ErrorCode::CollarTooSmall, "simplices touching the subcomplex exceed the collar");
  }
  auto lin = linearize_on(*f, sub);
  return std::make_shared<HybridMap>(std::move(lin), std::move(f), std::move(in_sub));
}

namespace {

double total_volume(const SimplicialComplex& k, int d) {
  double v = 0.0;
  for (const auto& s : k.top_simplices())
    if (static_cast<int>(s.size()) - 1 == d) v += simplex_volume(k.points(s));
  return v;
}

// Coarse cell of every maximal simplex of `fine`, or nullopt when fine does
// not subdivide coarse.
std::optional<std::vector<int>> parent_cells(const SimplicialComplex& fine,
                                             const SimplicialComplex& coarse) {
  if (fine.ambient_dim() != coarse.ambient_dim()) return std::nullopt;
  const Locator loc(coarse);
  std::vector<int> out;
  out.reserve(fine.top_simplices().size());
  for (const auto& s : fine.top_simplices()) {
    const auto pts = fine.points(s);
    Point bary = Point::Zero(fine.ambient_dim());
    for (const auto& p : pts) bary += p / static_cast<double>(pts.size());
    const auto l = loc.locate(bary);
    if (l.top < 0) return std::nullopt;
    for (const auto& p : pts)
      if (!loc.contains(l.top, p)) return std::nullopt;
    if (coarse.top_simplices()[l.top].size() < s.size()) return std::nullopt;
    out.push_back(l.top);
  }
  for (int d = 0; d <= std::max(fine.dim(), coarse.dim()); ++d) {
    const double a = total_volume(fine, d);
    const double b = total_volume(coarse, d);
    if (d == 0) continue;
    if (std::abs(a - b) > 1e-9 * std::max({a, b, 1e-300})) return std::nullopt;
  }
  return out;
}

bool same_complex(const SimplicialComplex& a, const SimplicialComplex& b) {
  if (&a == &b) return true;
  if (a.num_vertices() != b.num_vertices() || a.top_simplices() != b.top_simplices()) return false;
  for (int v = 0; v < a.num_vertices(); ++v)
    if (a.vertex(v) != b.vertex(v)) return false;
  return true;
}

}  // namespace

bool subdivides(const SimplicialComplex& fine, const SimplicialComplex& coarse) {
  return parent_cells(fine, coarse).has_value();
}

MapDistance distances(const PiecewiseMap& f, const PiecewiseMap& g, int sample_depth) {
  const SimplicialComplex& kf = f.domain();
  const SimplicialComplex& kg = g.domain();
  if (f.target_dim() != g.target_dim())
    throw Error(ErrorCode::DomainMismatch, "maps have different target dimensions");
  const bool same = same_complex(kf, kg);
  const bool f_fine = same || kf.top_simplices().size() >= kg.top_simplices().size();
  const SimplicialComplex& fine = f_fine ? kf : kg;
  std::vector<int> other;
  if (same) {
    for (int i = 0; i < static_cast<int>(kf.top_simplices().size()); ++i) other.push_back(i);
  } else {
    auto cells = parent_cells(fine, f_fine ? kg : kf);
    if (!cells) throw Error(ErrorCode::DomainMismatch, "neither complex subdivides the other");
    other = std::move(*cells);
  }
  MapDistance out;
  for (int i = 0; i < static_cast<int>(fine.top_simplices().size()); ++i) {
    const auto pts = fine.points(fine.top_simplices()[i]);
    const int cf = f_fine ? i : other[i];
    const int cg = f_fine ? other[i] : i;
    const Matrix tangent = pts.size() > 1 ? tangent_plane(pts).basis()
                                          : Matrix(fine.ambient_dim(), 0);
    double sup0 = 0.0, sup1 = 0.0;
    for (const auto& x : lattice_points(pts, sample_depth)) {
      sup0 = std::max(sup0, (f.value(x, cf) - g.value(x, cg)).norm());
      if (tangent.cols() > 0)
        sup1 = std::max(sup1, operator_norm(f.derivative(x, cf, tangent) -
                                            g.derivative(x, cg, tangent)));
    }
    out.c0 = std::max(out.c0, sup0);
    out.c1 = std::max(out.c1, sup0 + sup1);
  }
  return out;
}

double distance(const PiecewiseMap& f, const PiecewiseMap& g, int order, int sample_depth) {
  const auto d = distances(f, g, sample_depth);
  return order == 0 ? d.c0 : d.c1;
}

namespace {

void check_opposing(size_t count, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  bool ok = !a.empty() && !b.empty() && all.size() == count;
  for (size_t i = 0; ok && i < all.size(); ++i) ok = all[i] == static_cast<int>(i);
  if (!ok) throw Error(ErrorCode::NotOpposingFaces, "faces must partition the vertices");
}

}  // namespace

PointMap interpolate(const std::vector<Point>& delta, const std::vector<int>& face_a,
                     const std::vector<int>& face_b, PointMap s_a, PointMap s_b) {
  check_opposing(delta.size(), face_a, face_b);
  return [delta, face_a, s_a = std::move(s_a), s_b = std::move(s_b)](const Point& x) {
    const auto bc = barycentric(delta, x);
    double t = 0.0;
    for (int i : face_a) t += bc.coords(i);
    return Point(t * s_a(x) + (1.0 - t) * s_b(x));
  };
}

std::vector<Point> join_map(const std::vector<Point>& delta, const std::vector<int>& face_a,
                            const std::vector<int>& face_b, const PointMap& s_a,
                            const PointMap& s_b) {
  check_opposing(delta.size(), face_a, face_b);
  std::vector<Point> images(delta.size());
  for (int i : face_a) images[i] = s_a(delta[i]);
  for (int i : face_b) images[i] = s_b(delta[i]);
  return images;
}

Point affine_eval(const std::vector<Point>& delta, const std::vector<Point>& images,
                  const Point& x) {
  const auto bc = barycentric(delta, x);
  Point out = Point::Zero(images.front().size());
  for (size_t i = 0; i < images.size(); ++i) out += bc.coords(static_cast<Eigen::Index>(i)) * images[i];
  return out;
}

JigglingCheck verify_jiggling(const PiecewiseMap& f, const PiecewiseMap& g, double eps) {
  JigglingCheck out;
  out.subdivides = same_complex(g.domain(), f.domain()) || subdivides(g.domain(), f.domain());
  if (!out.subdivides) return out;
  const auto d = distances(f, g);
  out.c0 = d.c0;
  out.c1 = d.c1;
  out.ok = d.c1 < eps;
  return out;
}

bool is_piecewise_embedding(const PLMap& f, double tol) {
  const SimplicialComplex& k = f.domain();
  const auto& tops = k.top_simplices();
  const size_t t = tops.size();
  std::vector<std::vector<Point>> imgs(t);
  std::vector<Point> lo(t), hi(t);
  double scale = 0.0;
  for (size_t i = 0; i < t; ++i) {
    imgs[i] = f.image_points(tops[i]);
    if (imgs[i].size() > 1 && is_degenerate(imgs[i], tol)) return false;
    lo[i] = hi[i] = imgs[i][0];
    for (const auto& p : imgs[i]) {
      lo[i] = lo[i].cwiseMin(p);
      hi[i] = hi[i].cwiseMax(p);
    }
    scale = std::max(scale, (hi[i] - lo[i]).maxCoeff());
  }
  const double pad = 1e-9 * std::max(scale, 1e-300);
  std::vector<size_t> order(t);
  for (size_t i = 0; i < t; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return lo[a](0) < lo[b](0); });
  for (size_t ii = 0; ii < t; ++ii) {
    const size_t i = order[ii];
    for (size_t jj = ii + 1; jj < t; ++jj) {
      const size_t j = order[jj];
      if (lo[j](0) > hi[i](0) + pad) break;
      if (((lo[j].array() - pad) > hi[i].array()).any() ||
          ((lo[i].array() - pad) > hi[j].array()).any())
        continue;
      std::vector<std::pair<int, int>> shared;
      for (size_t x = 0; x < tops[i].size(); ++x)
        for (size_t y = 0; y < tops[j].size(); ++y)
          if (tops[i][x] == tops[j][y]) shared.emplace_back(static_cast<int>(x), static_cast<int>(y));
      const auto probe = probe_intersection(imgs[i], imgs[j], shared);
      if (probe.intersect && probe.excess > 1e-9) return false;
    }
  }
  return true;
}

}  // namespace jigglekit
