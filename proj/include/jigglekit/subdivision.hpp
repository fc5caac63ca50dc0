#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "jigglekit/complex.hpp"

namespace jigglekit {

/// Child-to-parent bookkeeping of a subdivision.  Each child vertex is an
/// affine combination of parent vertices; the support of that combination
/// is the vertex's minimal carrier face.
struct SubdivisionMap {
  std::vector<std::vector<std::pair<int, double>>> vertex_weights;

  /// Smallest parent simplex containing the child simplex.
  Simplex carrier(const Simplex& child) const;
  /// Carrier of every maximal child simplex.
  std::map<Simplex, Simplex> top_carriers(const SimplicialComplex& child) const;
};

/// Chains two subdivisions: first maps K1 -> K, second maps K2 -> K1.
SubdivisionMap compose(const SubdivisionMap& first, const SubdivisionMap& second);

/// Identity bookkeeping for K as a subdivision of itself.
SubdivisionMap identity_map(const SimplicialComplex& k);

struct Subdivided {
  SimplicialComplex complex;
  SubdivisionMap map;
};

/// Cube-based subdivision: each ordered m-simplex is identified with the
/// ordered cell {0 <= x_1 <= ... <= x_m <= 1} of I^m, the cube is cut into
/// 2^{lm} subcubes and each subcube into the m! ordered cells, and the cells
/// inside the simplex are pulled back.  Shared faces subdivide identically.
Subdivided crystalline_subdivide(const SimplicialComplex& k, int levels);

/// One barycentric subdivision; new vertices are simplex barycenters
/// appended by dimension, then lexicographically.
Subdivided barycentric_subdivide(const SimplicialComplex& k);

/// Child simplices whose carrier lies in `parent_sub`.
SimplexSet restrict_subcomplex(const Subdivided& sub, const SimplexSet& parent_sub);

/// Canonical top-simplex shapes of K_l up to translation and scaling by 2^l.
using ModelClass = std::vector<long long>;
std::set<ModelClass> model_classes(const SimplicialComplex& k, int levels);

}  // namespace jigglekit
