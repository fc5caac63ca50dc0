#include <doctest.h>

#include "jigglekit/complex.hpp"
#include "jigglekit/error.hpp"
#include "jigglekit/subdivision.hpp"
#include "test_util.hpp"

using namespace jigglekit;
using testutil::code_of;

namespace {

SimplicialComplex path_abc() {
  return SimplicialComplex::build(1, {Point{{0.0}}, Point{{1.0}}, Point{{2.0}}}, {{0, 1}, {1, 2}});
}

SimplicialComplex triangle() {
  return SimplicialComplex::build(2, {Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.0, 1.0}}},
                                  {{0, 1, 2}});
}

}  // namespace

TEST_CASE("face closure counts") {
  auto t = triangle();
  CHECK(t.num_vertices() == 3);
  CHECK(t.simplices(1).size() == 3);
  CHECK(t.simplices(2).size() == 1);
  CHECK(t.dim() == 2);
  CHECK(t.is_pure());

  auto two = SimplicialComplex::build(
      2, {Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.0, 1.0}}, Point{{1.0, 1.0}}},
      {{0, 1, 2}, {1, 2, 3}});
  CHECK(two.num_vertices() == 4);
  CHECK(two.simplices(1).size() == 5);
  CHECK(two.simplices(2).size() == 2);
}

TEST_CASE("build rejects bad input") {
  const std::vector<Point> v{Point{{0.0, 0.0}}, Point{{2.0, 0.0}}, Point{{0.0, 1.0}},
                             Point{{1.0, 0.0}}, Point{{1.0, -1.0}}};
  CHECK(code_of([&] {
          SimplicialComplex::build(2, {Point{{0.0, 0.0}}, Point{{2.0, 0.0}}, Point{{0.0, 1.0}},
                                       Point{{1.0, 0.0}}, Point{{1.0, 1.0}}},
                                   {{0, 1, 2}, {3, 1, 4}});
        }) == ErrorCode::FaceIntersectionViolation);
  CHECK(code_of([&] { SimplicialComplex::build(2, v, {{0, 1, 7}}); }) ==
        ErrorCode::ValidationError);
  CHECK(code_of([&] { SimplicialComplex::build(2, v, {{0, 1, 1}}); }) ==
        ErrorCode::DegenerateSimplex);
  CHECK(code_of([&] { SimplicialComplex::build(2, v, {{0, 1, 3}}); }) ==
        ErrorCode::DegenerateSimplex);
}

TEST_CASE("path adjacency") {
  auto k = path_abc();
  const auto star = adjacency(k, 1, AdjacencyKind::Star);
  CHECK(star.simplices == SimplexSet{{0}, {1}, {2}, {0, 1}, {1, 2}});
  CHECK(star.vertices == std::vector<int>{0, 1, 2});
  const auto ring = adjacency(k, 1, AdjacencyKind::Ring);
  CHECK(ring.simplices == SimplexSet{{0}, {2}});
  const auto link = adjacency(k, 1, AdjacencyKind::Link);
  CHECK(link.simplices == SimplexSet{{0}, {2}});
  const auto cl = adjacency(k, SimplexSet{{0, 1}}, AdjacencyKind::Closure);
  CHECK(cl.simplices == SimplexSet{{0}, {1}, {0, 1}});
  CHECK(code_of([&] { adjacency(k, SimplexSet{{0, 2}}, AdjacencyKind::Star); }) ==
        ErrorCode::QueryNotInComplex);
  CHECK(code_of([&] { adjacency(k, 5, AdjacencyKind::Star); }) == ErrorCode::QueryNotInComplex);
}

TEST_CASE("iterated star grows outward") {
  std::vector<Point> v;
  std::vector<Simplex> s;
  for (int i = 0; i <= 6; ++i) v.push_back(Point{{double(i)}});
  for (int i = 0; i < 6; ++i) s.push_back({i, i + 1});
  auto k = SimplicialComplex::build(1, v, s);
  const auto once = iterated_star(k, {{3}}, 1);
  const auto twice = iterated_star(k, {{3}}, 2);
  CHECK(once.count({2, 3}) == 1);
  CHECK(once.count({1, 2}) == 0);
  CHECK(twice.count({1, 2}) == 1);
  CHECK(twice.count({0, 1}) == 0);
}

TEST_CASE("niceness") {
  auto t = triangle();
  // two sides of the triangle meet it in a non-face
  CHECK_FALSE(is_nice(t, closure({{0, 1}, {0, 2}})));
  CHECK(is_nice(t, closure({{0, 1}})));
  CHECK(is_nice(t, {}));
  CHECK(is_nice(t, {{2}}));
  // two opposite vertices of an edge, without the edge
  CHECK_FALSE(is_nice(t, {{0}, {1}}));
}

TEST_CASE("barycentric subdivision makes subcomplexes nice") {
  auto k = SimplicialComplex::build(
      2, {Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.0, 1.0}}, Point{{1.0, 1.0}}},
      {{0, 1, 2}, {1, 2, 3}});
  for (const SimplexSet& a : {closure({{0, 1}, {0, 2}}), SimplexSet{{0}, {3}},
                              closure({{1, 2}}), closure({{0, 1}, {1, 3}})}) {
    const auto b = barycentric_subdivide(k);
    CHECK(is_nice(b.complex, restrict_subcomplex(b, a)));
  }
}

TEST_CASE("tops_at and points") {
  auto k = SimplicialComplex::build(
      2, {Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.0, 1.0}}, Point{{1.0, 1.0}}},
      {{0, 1, 2}, {1, 2, 3}});
  CHECK(k.tops_at(1).size() == 2);
  CHECK(k.tops_at(0).size() == 1);
  CHECK(k.top_index({1, 2, 3}) == 1);
  CHECK(k.top_index({1, 2}) == -1);
  CHECK(k.points({0, 3})[1] == Point{{1.0, 1.0}});
  CHECK(k.num_simplices() == 4 + 5 + 2);
}
