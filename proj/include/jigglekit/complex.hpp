#pragma once

#include <map>
#include <set>
#include <vector>

#include "jigglekit/linalg.hpp"

namespace jigglekit {

/// Sorted vertex ids; the order is the complex's global vertex order.
using Simplex = std::vector<int>;
using SimplexSet = std::set<Simplex>;

/// All non-empty faces of `s` (including `s`), shortest first.
std::vector<Simplex> faces_of(const Simplex& s);

/// Finite ordered simplicial complex embedded in R^N.  Face closure is
/// computed eagerly; every stored simplex has sorted vertex ids.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Validating constructor (build_complex).
  static SimplicialComplex build(int ambient_dim, std::vector<Point> vertices,
                                 const std::vector<Simplex>& simplices);
  /// Trusted constructor for internally generated complexes: closes faces,
  /// skips the intersection and degeneracy checks.
  static SimplicialComplex trusted(int ambient_dim, std::vector<Point> vertices,
                                   const std::vector<Simplex>& simplices);

  int ambient_dim() const { return ambient_dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  const Point& vertex(int i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  int dim() const { return static_cast<int>(by_dim_.size()) - 1; }
  bool is_pure() const { return pure_; }

  /// Simplices of dimension d in lexicographic order.
  const std::vector<Simplex>& simplices(int d) const;
  /// Maximal simplices in lexicographic order.
  const std::vector<Simplex>& top_simplices() const { return top_; }
  bool contains(const Simplex& s) const;
  /// Index into top_simplices(), or -1.
  int top_index(const Simplex& s) const;
  /// Maximal simplices containing vertex v (indices into top_simplices()).
  const std::vector<int>& tops_at(int v) const { return tops_at_[v]; }
  std::vector<Point> points(const Simplex& s) const;
  size_t num_simplices() const;

 private:
  void close_faces(const std::vector<Simplex>& simplices);

  int ambient_dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<std::vector<Simplex>> by_dim_;
  std::vector<Simplex> top_;
  std::map<Simplex, int> top_index_;
  SimplexSet all_;
  std::vector<std::vector<int>> tops_at_;
  bool pure_ = true;
};

enum class AdjacencyKind { Star, Ring, Closure, Link, VLink };

/// Result of an adjacency query: a subcomplex and its vertex set.
struct Adjacency {
  SimplexSet simplices;
  std::vector<int> vertices;
};

/// Face closure of a set of simplices.
SimplexSet closure(const SimplexSet& s);

/// star: closure of all simplices meeting the query; ring: the part of the
/// star disjoint from the query; link: simplices disjoint from the query
/// whose join with some query simplex lies in the complex.  Throws
/// QueryNotInComplex.
Adjacency adjacency(const SimplicialComplex& k, const SimplexSet& query, AdjacencyKind kind);
Adjacency adjacency(const SimplicialComplex& k, int vertex, AdjacencyKind kind);

/// Iterated star: star applied `times` times.
SimplexSet iterated_star(const SimplicialComplex& k, const SimplexSet& query, int times);

/// Every simplex of star(sub) meets sub in a single face.
bool is_nice(const SimplicialComplex& k, const SimplexSet& sub);

}  // namespace jigglekit
