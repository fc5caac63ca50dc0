#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "jigglekit/perturbation.hpp"
#include "jigglekit/transversality.hpp"
#include "test_util.hpp"

using namespace jigglekit;
using testutil::code_of;

namespace {

Plane axis(int n, int i) { return plane_from_spanning({Point::Unit(n, i)}, n); }

Point rand_point(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd;
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = scale * nd(rng);
  return p;
}

// A star of points and edges around p in R^3 against one or two line foliations.
PerturbationRequest random_request(std::mt19937_64& rng) {
  PerturbationRequest req;
  req.p = rand_point(rng, 3);
  req.budget = 0.2;
  req.foliations.push_back(plane_from_spanning({rand_point(rng, 3)}, 3));
  if (rng() % 2) req.foliations.push_back(plane_from_spanning({rand_point(rng, 3)}, 3));
  for (int i = 0; i < 4; ++i) {
    const Point q = req.p + rand_point(rng, 3, 0.5);
    req.star_simplices.push_back({q});
    const Point r = q + rand_point(rng, 3, 0.5);
    bool ok = true;
    for (const auto& v : req.foliations) ok = ok && simplex_transverse({q, r}, v);
    if (ok) req.star_simplices.push_back({q, r});
  }
  // one point on the line through p along the first foliation
  req.star_simplices.push_back({Point(req.p + 0.3 * req.foliations[0].basis().col(0))});
  req.seed = rng();
  req.samples = 64;
  return req;
}

bool bitwise_equal(const Point& a, const Point& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

}  // namespace

TEST_CASE("avoiding a point on a line") {
  // the quotient of R^2 by the x-axis is the y-coordinate; the best center
  // sits halfway between the point and the edge of the ball
  QuotientFlats q{axis(2, 0), {AffineFlat{Point::Zero(1), Plane(1, Matrix(1, 0))}}};
  const auto r = avoid_flats(Point{{0.0, 0.0}}, 1.0, {q}, std::nullopt, 3, 256);
  CHECK(r.delta == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(r.p(1)) == doctest::Approx(r.delta).epsilon(0.02));
  CHECK(r.delta + (r.p - Point{{0.0, 0.0}}).norm() <= 1.0 + 1e-12);
}

TEST_CASE("avoid_flats edge cases") {
  const Point p{{0.3, -0.2}};
  const auto free = avoid_flats(p, 0.7, {QuotientFlats{axis(2, 0), {}}}, std::nullopt, 1);
  CHECK(free.p == p);
  CHECK(free.delta == 0.7);
  QuotientFlats full{axis(2, 0), {AffineFlat{Point::Zero(1), plane_from_spanning({Point{{1.0}}}, 1)}}};
  CHECK(code_of([&] { avoid_flats(p, 1.0, {full}, std::nullopt, 1); }) ==
        ErrorCode::InfeasibleDimensions);
}

TEST_CASE("perturb_vertex examples") {
  PerturbationRequest req;
  req.p = Point{{0.0, 0.0}};
  req.budget = 0.4;
  req.foliations = {axis(2, 0)};
  req.star_simplices = {{Point{{1.0, 0.0}}}};
  req.seed = 5;
  const auto r = perturb_vertex(req);
  CHECK(std::abs(r.p(1)) > 0.0);
  CHECK(r.achieved_delta > 0.1);
  CHECK(semitrans_margin(r.p, {Point{{1.0, 0.0}}}, axis(2, 0)) >= r.achieved_delta - 1e-12);

  req.star_simplices.clear();
  const auto e = perturb_vertex(req);
  CHECK(e.p == req.p);
  CHECK(e.achieved_delta == req.budget);

  req.budget = 0.0;
  CHECK(code_of([&] { perturb_vertex(req); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("three projected spans through the apex") {
  // R^3 along the x-axis: each edge projects to a line in the yz-plane
  // through the image of p
  const Point p{{0.0, 0.0, 0.0}};
  PerturbationRequest req;
  req.p = p;
  req.budget = 0.3;
  req.foliations = {axis(3, 0)};
  const std::vector<Point> dirs{Point{{0.2, 1.0, 0.0}}, Point{{-0.5, 0.0, 1.0}}, Point{{0.3, 1.0, 1.0}}};
  for (const auto& d : dirs) req.star_simplices.push_back({Point(p + 0.5 * d), Point(p + 1.0 * d)});
  req.seed = 9;
  for (const auto& s : req.star_simplices) CHECK(semitrans_margin(p, s, axis(3, 0)) == doctest::Approx(0.0));
  const auto r = perturb_vertex(req);
  CHECK(r.achieved_delta > 0.0);
  for (const auto& s : req.star_simplices)
    CHECK(semitrans_margin(r.p, s, axis(3, 0)) >= r.achieved_delta - 1e-12);
}

TEST_CASE("constraint flat with two foliations") {
  const Point p{{0.0, 0.0, 0.0}};
  PerturbationRequest req;
  req.p = p;
  req.budget = 0.5;
  req.foliations = {axis(3, 0), axis(3, 1)};
  req.constraint = AffineFlat{p, plane_from_spanning({Point{{0.0, 0.2, 1.0}}}, 3)};
  req.star_simplices = {{Point{{1.0, 0.0, 0.0}}}, {Point{{0.0, 1.0, 0.0}}}};
  req.seed = 2;
  const auto r = perturb_vertex(req);
  CHECK(point_flat_distance(r.p, *req.constraint) < 1e-12);
  CHECK(r.achieved_delta > 0.0);
  REQUIRE(r.certificate.size() == 4);
  for (const auto& c : r.certificate) {
    CHECK(c.margin >= r.achieved_delta);
    CHECK(semitrans_margin(r.p, req.star_simplices[static_cast<size_t>(c.simplex)],
                           req.foliations[static_cast<size_t>(c.foliation)]) ==
          doctest::Approx(c.margin).epsilon(1e-9));
  }
  // a constraint inside a foliation leaf is not transverse
  req.constraint = AffineFlat{p, axis(3, 0)};
  CHECK(code_of([&] { perturb_vertex(req); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("star simplices must be transverse") {
  PerturbationRequest req;
  req.p = Point{{0.0, 0.0, 0.0}};
  req.budget = 0.5;
  req.foliations = {axis(3, 0)};
  req.star_simplices = {{Point{{1.0, 1.0, 0.0}}, Point{{2.0, 1.0, 0.0}}}};
  CHECK(code_of([&] { perturb_vertex(req); }) == ErrorCode::StarNotTransverse);
}

TEST_CASE("perturbation contracts on random requests") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const auto req = random_request(rng);
    const auto r = perturb_vertex(req);
    CHECK((r.p - req.p).norm() + r.achieved_delta <= req.budget * (1.0 + 1e-12));
    CHECK(r.achieved_delta > 0.0);
    for (const auto& c : r.certificate) {
      CHECK(c.margin >= r.achieved_delta);
      CHECK(semitrans_margin(r.p, req.star_simplices[static_cast<size_t>(c.simplex)],
                             req.foliations[static_cast<size_t>(c.foliation)]) ==
            doctest::Approx(c.margin).epsilon(1e-9));
    }
    for (size_t d = 1; d < r.per_dimension.size(); ++d)
      CHECK(r.per_dimension[d] <= r.per_dimension[d - 1]);
    CHECK(r.per_dimension.front() <= req.budget);

    const auto again = perturb_vertex(req);
    CHECK(bitwise_equal(again.p, r.p));
    CHECK(again.achieved_delta == r.achieved_delta);

    // scale the geometry and the budget together
    auto big = req;
    const double l = 4.0;
    big.p *= l;
    big.budget *= l;
    for (auto& s : big.star_simplices)
      for (auto& x : s) x *= l;
    const auto rb = perturb_vertex(big);
    CHECK(rb.achieved_delta == doctest::Approx(l * r.achieved_delta).epsilon(1e-6));
  }
}

TEST_CASE("incumbent is kept when its margins are large") {
  PerturbationRequest req;
  req.p = Point{{0.0, 1.0}};
  req.budget = 0.2;
  req.foliations = {axis(2, 0)};
  req.star_simplices = {{Point{{0.0, 0.0}}}};
  req.accept_incumbent_above = 0.5;
  const auto r = perturb_vertex(req);
  CHECK(r.kept_incumbent);
  CHECK(r.p == req.p);
  CHECK(r.achieved_delta == doctest::Approx(0.2));
  req.accept_incumbent_above = 2.0;
  CHECK_FALSE(perturb_vertex(req).kept_incumbent);
}
