#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jigglekit/grassmannian.hpp"

namespace jigglekit {

/// Flats living in the quotient R^n / V, in coordinates of V's complement basis.
struct QuotientFlats {
  Plane v;
  std::vector<AffineFlat> flats;
};

struct AvoidResult {
  Point p;
  double delta = 0.0;
};

/// Searches p' in B(p, max_shift) (intersected with H) maximizing
///   min(eps - |p' - p|, min_{u,F} dist(pi_u(p'), F)),
/// so that B(p', delta) lies in B(p, eps) and its projections miss every
/// flat.  max_shift <= 0 means eps.  Throws InfeasibleDimensions.
AvoidResult avoid_flats(const Point& p, double eps, const std::vector<QuotientFlats>& quotients,
                        const std::optional<AffineFlat>& h, std::uint64_t seed, int samples = 256,
                        double max_shift = 0.0);

struct PerturbationRequest {
  Point p;
  double budget = 0.0;
  std::vector<std::vector<Point>> star_simplices;
  std::vector<Plane> foliations;
  std::optional<AffineFlat> constraint;
  std::uint64_t seed = 0;
  int samples = 256;
  /// pairing[u] lists the star simplices that matter for foliation u; empty
  /// means every simplex against every foliation.
  std::vector<std::vector<int>> pairing;
  /// Keep p when all its margins are at least this value (disabled if < 0).
  double accept_incumbent_above = -1.0;
};

struct CertificateEntry {
  int simplex = 0;
  int foliation = 0;
  double margin = 0.0;
};

struct PerturbationResult {
  Point p;
  double achieved_delta = 0.0;
  /// Radius after the stage handling joins of dimension d (index d - 1).
  std::vector<double> per_dimension;
  std::vector<CertificateEntry> certificate;
  bool kept_incumbent = false;
};

/// Dimension-by-dimension search: stage d recenters inside the previous
/// stage's ball (spending at most half its radius) so that all d-dimensional
/// joins with the star become semitransverse.  With a constraint flat H of
/// dimension D <= n-k only d <= D is required.  Throws InfeasibleDimensions,
/// StarNotTransverse, PreconditionViolated.
PerturbationResult perturb_vertex(const PerturbationRequest& req);

}  // namespace jigglekit
