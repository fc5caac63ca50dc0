#include <doctest.h>

#include <cmath>
#include <cstring>

#include "jigglekit/io.hpp"
#include "jigglekit/jiggling.hpp"
#include "test_util.hpp"

using namespace jigglekit;
using testutil::code_of;

namespace {

std::shared_ptr<PLMap> identity_on(const std::string& name) {
  auto k = std::make_shared<const SimplicialComplex>(io::builtin_complex(name));
  return std::make_shared<PLMap>(k, k->vertices());
}

Distribution horizontal(int n = 2) {
  return Distribution::constant(plane_from_spanning({Point::Unit(n, 0)}, n));
}

bool same_bits(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].size() != b[i].size() ||
        std::memcmp(a[i].data(), b[i].data(), sizeof(double) * a[i].size()) != 0)
      return false;
  return true;
}

// The Fig. 6 style pair: a triangle transverse to the horizontal field in
// every face, and a subdivision through a point level with one vertex.
SimplicialComplex tilted_triangle() {
  return SimplicialComplex::build(2, {Point{{0.0, 0.0}}, Point{{2.0, 1.0}}, Point{{0.5, 2.0}}},
                                  {{0, 1, 2}});
}
SimplicialComplex tilted_split() {
  return SimplicialComplex::build(
      2, {Point{{0.0, 0.0}}, Point{{2.0, 1.0}}, Point{{0.5, 2.0}}, Point{{0.25, 1.0}}},
      {{0, 1, 3}, {1, 2, 3}});
}

}  // namespace

TEST_CASE("square grid against the horizontal field") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  cfg.level = 2;
  const auto o = jiggle_euclidean(*f, horizontal(), cfg);
  CHECK(o.level == 2);
  CHECK(o.report.pass);
  CHECK(o.k_out().top_simplices().size() == 8u * 16u);
  CHECK(o.distances.c1 < cfg.gamma);
  CHECK(o.distances.c0 < cfg.gamma * 0.25);
  CHECK(is_piecewise_embedding(*o.g));
  CHECK(verify_jiggling(*f, *o.g, cfg.gamma).ok);
  for (const auto& e : o.k_out().simplices(1)) {
    const Point d = o.g->image(e[1]) - o.g->image(e[0]);
    CHECK(std::abs(d(1)) > 1e-9 * d.norm());
  }
  ReportOptions opt;
  opt.notion = Notion::GeneralPosition;
  CHECK(build_report(o.k_out(), o.g->images(), horizontal(), opt).pass);
  CHECK(o.moved_vertices > 0);
  for (size_t v = 0; v < o.anchors.size(); ++v)
    CHECK((o.g->image(static_cast<int>(v)) - o.anchors[v]).norm() <= o.vertex_budget);
}

TEST_CASE("a transverse map needs no moves") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  cfg.level = 2;
  const auto o = jiggle_euclidean(*f, horizontal(), cfg);
  JigglingConfig again = cfg;
  again.level = 0;
  const auto o2 = jiggle_euclidean(*o.g, horizontal(), again);
  CHECK(o2.moved_vertices == 0);
  CHECK(same_bits(o2.g->images(), o.g->images()));
}

TEST_CASE("seeded runs are reproducible") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  cfg.level = 2;
  const auto a = jiggle_euclidean(*f, horizontal(), cfg);
  const auto b = jiggle_euclidean(*f, horizontal(), cfg);
  CHECK(same_bits(a.g->images(), b.g->images()));
  CHECK(io::dump(io::to_json(a)) == io::dump(io::to_json(b)));
  cfg.seed = 2;
  const auto c = jiggle_euclidean(*f, horizontal(), cfg);
  CHECK_FALSE(same_bits(a.g->images(), c.g->images()));
  CHECK(c.report.pass);
}

TEST_CASE("budgets") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  cfg.level = 2;
  cfg.gamma = 0.0;
  CHECK(code_of([&] { jiggle_euclidean(*f, horizontal(), cfg); }) == ErrorCode::BudgetViolation);
  // already transverse: nothing to spend
  const auto tilt = std::make_shared<const SimplicialComplex>(tilted_triangle());
  const PLMap g(tilt, tilt->vertices());
  cfg.level = 0;
  CHECK(jiggle_euclidean(g, horizontal(), cfg).report.pass);
}

TEST_CASE("automatic level follows the oscillation") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  std::vector<int> levels;
  for (double w : {0.05, 0.1, 0.2, 0.4})
    levels.push_back(auto_level(*f, Distribution::builtin("planar_rotor(" + std::to_string(w) + ")"), cfg));
  for (size_t i = 1; i < levels.size(); ++i) CHECK(levels[i] == levels[i - 1] + 1);
  CHECK(auto_level(*f, horizontal(), cfg) == 0);
  cfg.max_level = 2;
  CHECK(code_of([&] { auto_level(*f, Distribution::builtin("planar_rotor(0.8)"), cfg); }) ==
        ErrorCode::LevelExhausted);
}

TEST_CASE("rotor field in the plane") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  const auto xi = Distribution::builtin("planar_rotor(0.1)");
  const auto o = jiggle_euclidean(*f, xi, cfg);
  CHECK(o.report.pass);
  CHECK(o.level == auto_level(*f, xi, cfg));
  CHECK(o.distances.c1 < cfg.gamma);
  for (const auto& t : o.k_out().top_simplices())
    CHECK(general_position(o.g->image_points(t), xi).ok);
}

TEST_CASE("box grid against a line field") {
  const auto f = identity_on("box_grid(2)");
  JigglingConfig cfg;
  cfg.level = 0;
  const auto o = jiggle_euclidean(*f, horizontal(3), cfg);
  CHECK(o.report.pass);
  CHECK(o.k_out().top_simplices().size() == 48u);
  CHECK(o.distances.c1 < cfg.gamma);
  CHECK(is_piecewise_embedding(*o.g));
}

TEST_CASE("tower") {
  const auto f = identity_on("unit_square_grid(2)");
  JigglingConfig cfg;
  const auto os = jiggle_tower(*f, horizontal(), cfg, {2, 3});
  REQUIRE(os.size() == 2);
  CHECK(os[0].level == 2);
  CHECK(os[1].level == 3);
  for (const auto& o : os) CHECK(o.report.pass);
  CHECK(os[0].distances.c0 / os[1].distances.c0 == doctest::Approx(2.0).epsilon(0.25));
  CHECK(os[1].report.min_eps >= 0.5 * os[0].report.min_eps);
}

TEST_CASE("pullback distributions") {
  auto k = std::make_shared<const SimplicialComplex>(tilted_triangle());
  // f(x, y) = (x + y, y)
  std::vector<Point> imgs;
  for (const auto& p : k->vertices()) imgs.push_back(Point{{p(0) + p(1), p(1)}});
  const PLMap f(k, imgs);
  const auto pb = pullback_distributions(f, Distribution::constant(plane_from_spanning({Point{{1.0, 1.0}}}, 2)));
  REQUIRE(pb.size() == 1);
  REQUIRE(pb[0].has_value());
  // J^{-1} (1, 1) = (0, 1)
  CHECK(d_proj(pb[0]->at(k->vertex(0)), plane_from_spanning({Point{{0.0, 1.0}}}, 2)) < 1e-12);
  std::vector<Point> flat;
  for (const auto& p : k->vertices()) flat.push_back(Point{{p(0), p(1), 0.0}});
  CHECK(code_of([&] { pullback_distributions(PLMap(k, flat), horizontal(3)); }) ==
        ErrorCode::PreconditionViolated);
}

TEST_CASE("jiggling a subdivision") {
  const auto k = tilted_triangle();
  const auto refined = tilted_split();
  const auto xi = horizontal();
  CHECK(stratified_transverse(k, k.vertices(), xi.at(Point::Zero(2))));
  CHECK_FALSE(stratified_transverse(refined, refined.vertices(), xi.at(Point::Zero(2))));
  JigglingConfig cfg;
  cfg.level = 0;
  const auto s = jiggle_subdivision(k, refined, TopDistributions{xi}, cfg);
  CHECK(s.report.pass);
  const auto& kk = s.t->domain();
  ReportOptions opt;
  opt.notion = Notion::Stratified;
  CHECK(build_report(kk, s.t->images(), xi, opt).pass);
  CHECK(s.moved_vertices > 0);
  // vertices stay in their carriers
  for (int v = 0; v < kk.num_vertices(); ++v) {
    const auto pts = k.points(s.carrier[static_cast<size_t>(v)]);
    const auto bc = barycentric(pts, s.t->image(v));
    CHECK(bc.residual <= 1e-12);
    CHECK(bc.coords.minCoeff() >= -1e-12);
    if (pts.size() == 1) CHECK(s.t->image(v) == kk.vertex(v));
  }
  // images tile the triangle
  double vol = 0.0;
  for (const auto& t : kk.top_simplices()) vol += simplex_volume(s.t->image_points(t));
  CHECK(vol == doctest::Approx(simplex_volume(k.vertices())).epsilon(1e-9));
  // via a map: the identity pulls xi back to itself
  auto kp = std::make_shared<const SimplicialComplex>(k);
  const auto s2 = jiggle_subdivision(PLMap(kp, kp->vertices()), refined, xi, cfg);
  CHECK(same_bits(s2.t->images(), s.t->images()));
}

TEST_CASE("relative jiggling keeps A fixed") {
  auto k = std::make_shared<const SimplicialComplex>(io::builtin_complex("strip(4)"));
  const PLMap f(k, k->vertices());
  const auto xi = Distribution::constant(plane_from_spanning({Point{{1.0, 1.0}}}, 2));
  JigglingConfig cfg;
  cfg.level = 0;
  const SimplexSet a = closure({{0, 5}});
  const auto o = jiggle_relative(f, xi, cfg, a, {}, 0.0);
  CHECK(o.report.pass);
  CHECK(o.distances.c1 < cfg.gamma);
  const Locator loc(*k);
  for (int v = 0; v < o.k_out().num_vertices(); ++v) {
    const auto l = loc.locate(o.k_out().vertex(v));
    if (a.count(l.carrier)) {
      const Point fx = evaluate(f, o.k_out().vertex(v));
      CHECK(std::memcmp(fx.data(), o.g->image(v).data(), sizeof(double) * 2) == 0);
    }
  }
  // with a second fixed edge and a collar
  const SimplexSet b = closure({{4, 9}});
  cfg.level = 0;
  CHECK(code_of([&] { jiggle_relative(f, xi, cfg, a, b, 0.3); }) == ErrorCode::CollarTooSmall);
  cfg.level = -1;
  const auto ob = jiggle_relative(f, xi, cfg, a, b, 0.3);
  CHECK(ob.report.pass);
  CHECK(ob.level >= 1);
}
