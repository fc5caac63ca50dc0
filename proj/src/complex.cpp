#include "jigglekit/complex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jigglekit/error.hpp"
#include "jigglekit/shape.hpp"

namespace jigglekit {

std::vector<Simplex> faces_of(const Simplex& s) {
  std::vector<Simplex> out;
  const int n = static_cast<int>(s.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Simplex f;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) f.push_back(s[i]);
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

void SimplicialComplex::close_faces(const std::vector<Simplex>& simplices) {
  for (const auto& s : simplices)
    for (auto& f : faces_of(s)) all_.insert(std::move(f));
  int maxdim = -1;
  for (const auto& s : all_) maxdim = std::max(maxdim, static_cast<int>(s.size()) - 1);
  by_dim_.assign(maxdim + 1, {});
  for (const auto& s : all_) by_dim_[s.size() - 1].push_back(s);

  // a simplex is maximal when no simplex one dimension up contains it
  SimplexSet covered;
  for (int d = 1; d <= maxdim; ++d)
    for (const auto& s : by_dim_[d])
      for (size_t drop = 0; drop < s.size(); ++drop) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<long>(drop));
        covered.insert(std::move(f));
      }
  top_.clear();
  for (const auto& s : all_)
    if (!covered.count(s)) top_.push_back(s);
  pure_ = true;
  for (const auto& s : top_)
    if (static_cast<int>(s.size()) - 1 != maxdim) pure_ = false;
  top_index_.clear();
  tops_at_.assign(vertices_.size(), {});
  for (size_t i = 0; i < top_.size(); ++i) {
    top_index_[top_[i]] = static_cast<int>(i);
    for (int v : top_[i]) tops_at_[v].push_back(static_cast<int>(i));
  }
}

SimplicialComplex SimplicialComplex::trusted(int ambient_dim, std::vector<Point> vertices,
                                             const std::vector<Simplex>& simplices) {
  SimplicialComplex k;
  k.ambient_dim_ = ambient_dim;
  k.vertices_ = std::move(vertices);
  std::vector<Simplex> sorted = simplices;
  for (auto& s : sorted) std::sort(s.begin(), s.end());
  k.close_faces(sorted);
  return k;
}

namespace {

struct Box {
  Point lo, hi;
};

Box bounding_box(const std::vector<Point>& pts) {
  Box b{pts.front(), pts.front()};
  for (const auto& p : pts) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  return b;
}

}  // namespace

SimplicialComplex SimplicialComplex::build(int ambient_dim, std::vector<Point> vertices,
                                           const std::vector<Simplex>& simplices) {
  if (ambient_dim <= 0) throw Error(ErrorCode::ValidationError, "ambient_dim must be positive");
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].size() != ambient_dim)
      throw Error(ErrorCode::ValidationError,
                  "vertex " + std::to_string(i) + " has wrong dimension");
    if (!vertices[i].allFinite())
      throw Error(ErrorCode::ValidationError, "vertex " + std::to_string(i) + " not finite");
  }
  std::vector<Simplex> sorted;
  sorted.reserve(simplices.size());
  for (size_t i = 0; i < simplices.size(); ++i) {
    Simplex s = simplices[i];
    if (s.empty()) throw Error(ErrorCode::ValidationError, "empty simplex");
    for (int v : s)
      if (v < 0 || v >= static_cast<int>(vertices.size()))
        throw Error(ErrorCode::ValidationError,
                    "simplex " + std::to_string(i) + " has vertex index out of range");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error(ErrorCode::DegenerateSimplex,
                  "simplex " + std::to_string(i) + " repeats a vertex");
    if (static_cast<int>(s.size()) - 1 > ambient_dim)
      throw Error(ErrorCode::DegenerateSimplex,
                  "simplex " + std::to_string(i) + " exceeds the ambient dimension");
    sorted.push_back(std::move(s));
  }
  SimplicialComplex k = trusted(ambient_dim, std::move(vertices), sorted);

  for (const auto& s : k.top_)
    if (s.size() > 1 && is_degenerate(k.points(s)))
      throw Error(ErrorCode::DegenerateSimplex, "degenerate input simplex");

  // pairwise check of maximal simplices with overlapping bounding boxes
  const size_t t = k.top_.size();
  std::vector<Box> boxes(t);
  std::vector<size_t> order(t);
  double scale = 0.0;
  for (size_t i = 0; i < t; ++i) {
    boxes[i] = bounding_box(k.points(k.top_[i]));
    scale = std::max(scale, (boxes[i].hi - boxes[i].lo).maxCoeff());
    order[i] = i;
  }
  const double pad = 1e-9 * std::max(scale, 1e-300);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return boxes[a].lo(0) < boxes[b].lo(0); });
  for (size_t ii = 0; ii < t; ++ii) {
    const size_t i = order[ii];
    for (size_t jj = ii + 1; jj < t; ++jj) {
      const size_t j = order[jj];
      if (boxes[j].lo(0) > boxes[i].hi(0) + pad) break;
      if (((boxes[j].lo.array() - pad) > boxes[i].hi.array()).any() ||
          ((boxes[i].lo.array() - pad) > boxes[j].hi.array()).any())
        continue;
      const Simplex& a = k.top_[i];
      const Simplex& b = k.top_[j];
      std::vector<std::pair<int, int>> shared;
      for (size_t x = 0; x < a.size(); ++x)
        for (size_t y = 0; y < b.size(); ++y)
          if (a[x] == b[y]) shared.emplace_back(static_cast<int>(x), static_cast<int>(y));
      const auto probe = probe_intersection(k.points(a), k.points(b), shared);
      if (probe.intersect && probe.excess > 1e-9)
        throw Error(ErrorCode::FaceIntersectionViolation,
                    "simplices " + std::to_string(i) + " and " + std::to_string(j) +
                        " meet outside a common face");
    }
  }
  return k;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int d) const {
  static const std::vector<Simplex> kEmpty;
  if (d < 0 || d >= static_cast<int>(by_dim_.size())) return kEmpty;
  return by_dim_[d];
}

bool SimplicialComplex::contains(const Simplex& s) const { return all_.count(s) > 0; }

int SimplicialComplex::top_index(const Simplex& s) const {
  auto it = top_index_.find(s);
  return it == top_index_.end() ? -1 : it->second;
}

std::vector<Point> SimplicialComplex::points(const Simplex& s) const {
  std::vector<Point> out;
  out.reserve(s.size());
  for (int v : s) out.push_back(vertices_[v]);
  return out;
}

size_t SimplicialComplex::num_simplices() const { return all_.size(); }

SimplexSet closure(const SimplexSet& s) {
  SimplexSet out;
  for (const auto& x : s)
    for (auto& f : faces_of(x)) out.insert(std::move(f));
  return out;
}

namespace {

std::vector<int> vertex_set(const SimplexSet& s) {
  std::set<int> vs;
  for (const auto& x : s) vs.insert(x.begin(), x.end());
  return {vs.begin(), vs.end()};
}

bool meets(const Simplex& s, const std::set<int>& verts) {
  for (int v : s)
    if (verts.count(v)) return true;
  return false;
}

}  // namespace

Adjacency adjacency(const SimplicialComplex& k, const SimplexSet& query, AdjacencyKind kind) {
  for (const auto& q : query)
    if (!k.contains(q)) throw Error(ErrorCode::QueryNotInComplex, "query simplex not in complex");
  const SimplexSet q = closure(query);
  const auto qv = vertex_set(q);
  const std::set<int> qverts(qv.begin(), qv.end());

  // maximal simplices meeting the query generate the star
  SimplexSet star_tops;
  for (int v : qv)
    for (int t : k.tops_at(v)) star_tops.insert(k.top_simplices()[t]);
  const SimplexSet star = closure(star_tops);

  Adjacency out;
  switch (kind) {
    case AdjacencyKind::Closure:
      out.simplices = q;
      break;
    case AdjacencyKind::Star:
      out.simplices = star;
      break;
    case AdjacencyKind::Ring:
      for (const auto& s : star)
        if (!meets(s, qverts)) out.simplices.insert(s);
      break;
    case AdjacencyKind::Link:
    case AdjacencyKind::VLink:
      for (const auto& s : star) {
        if (meets(s, qverts)) continue;
        for (const auto& t : q) {
          Simplex j = s;
          j.insert(j.end(), t.begin(), t.end());
          std::sort(j.begin(), j.end());
          if (k.contains(j)) {
            out.simplices.insert(s);
            break;
          }
        }
      }
      break;
  }
  out.vertices = vertex_set(out.simplices);
  if (kind == AdjacencyKind::VLink) out.simplices.clear();
  return out;
}

Adjacency adjacency(const SimplicialComplex& k, int vertex, AdjacencyKind kind) {
  if (vertex < 0 || vertex >= k.num_vertices())
    throw Error(ErrorCode::QueryNotInComplex, "vertex out of range");
  return adjacency(k, SimplexSet{Simplex{vertex}}, kind);
}

SimplexSet iterated_star(const SimplicialComplex& k, const SimplexSet& query, int times) {
  SimplexSet cur = closure(query);
  for (int i = 0; i < times; ++i) cur = adjacency(k, cur, AdjacencyKind::Star).simplices;
  return cur;
}

bool is_nice(const SimplicialComplex& k, const SimplexSet& sub) {
  for (const auto& s : sub)
    if (!k.contains(s)) throw Error(ErrorCode::QueryNotInComplex, "subcomplex not in complex");
  if (sub.empty()) return true;
  const SimplexSet a = closure(sub);
  const auto av = vertex_set(a);
  const std::set<int> averts(av.begin(), av.end());
  const SimplexSet star = adjacency(k, a, AdjacencyKind::Star).simplices;
  for (const auto& s : star) {
    Simplex inside;
    for (int v : s)
      if (averts.count(v)) inside.push_back(v);
    if (!inside.empty() && !a.count(inside)) return false;
  }
  return true;
}

}  // namespace jigglekit
