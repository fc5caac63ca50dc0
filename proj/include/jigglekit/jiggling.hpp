#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "jigglekit/distribution.hpp"
#include "jigglekit/pl_map.hpp"
#include "jigglekit/transversality.hpp"

namespace jigglekit {

struct JigglingConfig {
  double gamma = 0.2;
  /// Crystalline level; -1 selects it automatically.
  int level = -1;
  int min_level = 0;
  int max_level = 8;
  /// Per-vertex budget in units of 2^-l.
  double epsilon_vertex = 0.25;
  std::uint64_t seed = 1;
  double degeneracy_tol = kDegeneracyTol;
  double rank_tol = kRankTol;
  /// Margin floor in units of 2^-l; used for incumbent acceptance and by
  /// auto_level.
  double margin_floor = 0.05;
  int sample_depth = 3;
  int search_samples = 128;
  /// Largest complex auto_level may build (maximal simplices).
  std::size_t max_simplices = 200000;
};

struct JigglingOutcome {
  std::shared_ptr<PLMap> g;
  SubdivisionMap subdivision;  // K_out -> K
  TransversalityReport report;
  MapDistance distances;
  int level = 0;
  std::vector<Point> anchors;  // unperturbed vertex images
  int moved_vertices = 0;
  double vertex_budget = 0.0;
  JigglingConfig config;

  const SimplicialComplex& k_out() const { return g->domain(); }
};

/// Smallest level at which the linearization fits half the budgets and the
/// oscillation of xi over each image simplex is below
/// margin_floor / (4 rmax), both measured in units of 2^-l.  Throws
/// LevelExhausted.
int auto_level(const PiecewiseMap& f, const Distribution& xi, const JigglingConfig& cfg);

/// Linearize f on K_l and perturb the vertex images in global order so that
/// every image simplex is in general position with respect to xi.  Throws
/// PerturbationFailed, EmbeddingLost, BudgetViolation.
JigglingOutcome jiggle_euclidean(const PiecewiseMap& f, const Distribution& xi,
                                 const JigglingConfig& cfg);

std::vector<JigglingOutcome> jiggle_tower(const PiecewiseMap& f, const Distribution& xi,
                                          const JigglingConfig& cfg,
                                          const std::vector<int>& levels);

struct SubdivisionJiggle {
  std::shared_ptr<PLMap> t;          // T : |K''| -> |K|, vertex images in |K|
  SubdivisionMap to_k;               // K'' -> K (unperturbed positions)
  std::vector<Simplex> carrier;      // minimal carrier face in K per vertex
  std::vector<int> order;            // processing order
  TransversalityReport report;
  int moved_vertices = 0;
  int level = 0;
};

/// Per-top-simplex distributions on the domain (nullopt: no constraint).
using TopDistributions = std::vector<std::optional<Distribution>>;

/// Jiggle the subdivision `refined` of K: barycentric then crystalline
/// subdivision, vertices moved inside their minimal carrier faces of K so
/// that every simplex of K'' is in general position with respect to the
/// distribution of the K-simplex containing it.  Throws SkeletonViolation,
/// VolumeMismatch, PerturbationFailed, PreconditionViolated.
SubdivisionJiggle jiggle_subdivision(const SimplicialComplex& k, const SimplicialComplex& refined,
                                     const TopDistributions& xi, const JigglingConfig& cfg);
/// Same with xi pulled back through f (affine and invertible per simplex).
SubdivisionJiggle jiggle_subdivision(const PLMap& f, const SimplicialComplex& refined,
                                     const Distribution& xi, const JigglingConfig& cfg);

/// Pullbacks of xi through the affine pieces of f.
TopDistributions pullback_distributions(const PLMap& f, const Distribution& xi);

/// Jiggle f keeping it unchanged on |A u B|; general position is certified
/// on the simplices with no vertex in |B| (which lie outside the radius
/// `collar` around |B|).  Throws as jiggle_euclidean plus CollarTooSmall.
JigglingOutcome jiggle_relative(const PLMap& f, const Distribution& xi, const JigglingConfig& cfg,
                                const SimplexSet& a, const SimplexSet& b, double collar);

}  // namespace jigglekit
