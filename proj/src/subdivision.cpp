#include "jigglekit/subdivision.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jigglekit/error.hpp"

namespace jigglekit {

Simplex SubdivisionMap::carrier(const Simplex& child) const {
  std::set<int> support;
  for (int v : child)
    for (const auto& [p, w] : vertex_weights[v])
      if (w != 0.0) support.insert(p);
  return {support.begin(), support.end()};
}

std::map<Simplex, Simplex> SubdivisionMap::top_carriers(const SimplicialComplex& child) const {
  std::map<Simplex, Simplex> out;
  for (const auto& s : child.top_simplices()) out[s] = carrier(s);
  return out;
}

SubdivisionMap compose(const SubdivisionMap& first, const SubdivisionMap& second) {
  SubdivisionMap out;
  out.vertex_weights.reserve(second.vertex_weights.size());
  for (const auto& ws : second.vertex_weights) {
    std::map<int, double> acc;
    for (const auto& [mid, w] : ws)
      for (const auto& [p, w2] : first.vertex_weights[mid]) acc[p] += w * w2;
    std::vector<std::pair<int, double>> row;
    for (const auto& [p, w] : acc)
      if (std::abs(w) > 1e-15) row.emplace_back(p, w);
    out.vertex_weights.push_back(std::move(row));
  }
  return out;
}

SubdivisionMap identity_map(const SimplicialComplex& k) {
  SubdivisionMap out;
  for (int v = 0; v < k.num_vertices(); ++v) out.vertex_weights.push_back({{v, 1.0}});
  return out;
}

namespace {

using Key = std::vector<std::pair<int, long long>>;

struct VertexTable {
  std::map<Key, int> index;
  std::vector<Point> coords;
  std::vector<std::vector<std::pair<int, double>>> weights;

  int get(const Key& key, const SimplicialComplex& k, double denom) {
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    Point p = Point::Zero(k.ambient_dim());
    std::vector<std::pair<int, double>> w;
    for (const auto& [v, c] : key) {
      const double t = static_cast<double>(c) / denom;
      p += t * k.vertex(v);
      w.emplace_back(v, t);
    }
    const int id = static_cast<int>(coords.size());
    index.emplace(key, id);
    coords.push_back(std::move(p));
    weights.push_back(std::move(w));
    return id;
  }
};

}  // namespace

Subdivided crystalline_subdivide(const SimplicialComplex& k, int levels) {
  if (levels < 0) throw Error(ErrorCode::PreconditionViolated, "levels must be >= 0");
  const long long big = 1LL << levels;
  const double denom = static_cast<double>(big);
  VertexTable table;
  for (int v = 0; v < k.num_vertices(); ++v) table.get(Key{{v, big}}, k, denom);

  std::vector<Simplex> children;
  for (const auto& sigma : k.top_simplices()) {
    const int m = static_cast<int>(sigma.size()) - 1;
    if (m == 0) {
      children.push_back(sigma);
      continue;
    }
    // barycentric weights of a lattice point X (integer coordinates in
    // [0, big]^m, non-decreasing): c_0 = X_1, c_j = X_{j+1} - X_j, c_m = big - X_m
    auto key_of = [&](const std::vector<long long>& x) {
      Key key;
      for (int j = 0; j <= m; ++j) {
        const long long lo = j == 0 ? 0 : x[j - 1];
        const long long hi = j == m ? big : x[j];
        const long long c = hi - lo;
        if (c > 0) key.emplace_back(sigma[j], c);
      }
      std::sort(key.begin(), key.end());
      return key;
    };
    std::vector<long long> corner(m, 0);
    std::vector<int> perm(m);
    const long long cubes = 1LL << (levels * m);
    for (long long idx = 0; idx < cubes; ++idx) {
      long long rest = idx;
      for (int i = 0; i < m; ++i) {
        corner[i] = rest % big;
        rest /= big;
      }
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<std::vector<long long>> cell;
        std::vector<long long> y = corner;
        cell.push_back(y);
        for (int t = 0; t < m; ++t) {
          ++y[perm[t]];
          cell.push_back(y);
        }
        // barycenter test (scaled by m+1, exact in integers)
        std::vector<long long> bc(m, 0);
        for (const auto& c : cell)
          for (int i = 0; i < m; ++i) bc[i] += c[i];
        bool inside = true;
        for (int i = 0; i + 1 < m && inside; ++i) inside = bc[i] <= bc[i + 1];
        if (!inside) continue;
        Simplex child;
        for (const auto& c : cell) child.push_back(table.get(key_of(c), k, denom));
        std::sort(child.begin(), child.end());
        children.push_back(std::move(child));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  Subdivided out;
  out.map.vertex_weights = std::move(table.weights);
  out.complex = SimplicialComplex::trusted(k.ambient_dim(), std::move(table.coords), children);
  return out;
}

Subdivided barycentric_subdivide(const SimplicialComplex& k) {
  std::map<Simplex, int> ids;
  std::vector<Point> coords;
  SubdivisionMap map;
  for (int v = 0; v < k.num_vertices(); ++v) {
    ids[{v}] = v;
    coords.push_back(k.vertex(v));
    map.vertex_weights.push_back({{v, 1.0}});
  }
  for (int d = 1; d <= k.dim(); ++d)
    for (const auto& s : k.simplices(d)) {
      Point c = Point::Zero(k.ambient_dim());
      std::vector<std::pair<int, double>> w;
      const double t = 1.0 / static_cast<double>(s.size());
      for (int v : s) {
        c += t * k.vertex(v);
        w.emplace_back(v, t);
      }
      ids[s] = static_cast<int>(coords.size());
      coords.push_back(std::move(c));
      map.vertex_weights.push_back(std::move(w));
    }
  std::vector<Simplex> children;
  for (const auto& sigma : k.top_simplices()) {
    Simplex perm = sigma;
    do {
      Simplex chain, child;
      for (int v : perm) {
        chain.push_back(v);
        Simplex sorted = chain;
        std::sort(sorted.begin(), sorted.end());
        child.push_back(ids.at(sorted));
      }
      std::sort(child.begin(), child.end());
      children.push_back(std::move(child));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  Subdivided out;
  out.complex = SimplicialComplex::trusted(k.ambient_dim(), std::move(coords), children);
  out.map = std::move(map);
  return out;
}

SimplexSet restrict_subcomplex(const Subdivided& sub, const SimplexSet& parent_sub) {
  const SimplexSet parent = closure(parent_sub);
  SimplexSet out;
  for (int d = 0; d <= sub.complex.dim(); ++d)
    for (const auto& s : sub.complex.simplices(d))
      if (parent.count(sub.map.carrier(s))) out.insert(s);
  return out;
}

std::set<ModelClass> model_classes(const SimplicialComplex& k, int levels) {
  const Subdivided sub = crystalline_subdivide(k, levels);
  const double scale = std::ldexp(1.0, levels);
  std::set<ModelClass> out;
  for (const auto& s : sub.complex.top_simplices()) {
    auto pts = sub.complex.points(s);
    for (auto& p : pts) p *= scale;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a(i) - b(i)) > 1e-9) return a(i) < b(i);
      }
      return false;
    });
    ModelClass key;
    for (const auto& p : pts)
      for (Eigen::Index i = 0; i < p.size(); ++i)
        key.push_back(std::llround((p(i) - pts[0](i)) * 1e7));
    out.insert(std::move(key));
  }
  return out;
}

}  // namespace jigglekit
