#include <doctest.h>

#include <cmath>
#include <random>

#include "jigglekit/io.hpp"
#include "jigglekit/transversality.hpp"
#include "test_util.hpp"

using namespace jigglekit;
using testutil::code_of;

namespace {

Plane span(std::vector<Point> v) {
  const int n = static_cast<int>(v[0].size());
  return plane_from_spanning(v, n);
}

Plane horizontal() { return span({Point{{1.0, 0.0}}}); }

Point rand_point(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Point p(n);
  for (int i = 0; i < n; ++i) p(i) = nd(rng);
  return p;
}

Plane rand_plane(std::mt19937_64& rng, int n, int k) {
  Matrix m(n, k);
  for (int j = 0; j < k; ++j) m.col(j) = rand_point(rng, n);
  return plane_from_matrix(m);
}

// Transversality straight from the definition: rank of [edges | V].
bool rank_definition(const std::vector<Point>& verts, const Plane& v) {
  const int n = v.ambient_dim();
  const Matrix e = edge_matrix(verts);
  Matrix m(n, e.cols() + v.rank());
  m << e, v.basis();
  return numerical_rank(m) == std::min<int>(static_cast<int>(e.cols()) + v.rank(), n);
}

struct Config {
  Point p;
  std::vector<Point> simplex;
  Plane v;
};

// Random (p, D, V) with D transverse and dim D + 1 <= n - k; one in three
// places p on the flat ASpan(D) + V.
Config random_config(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> kd(1, n - 1);
  for (;;) {
    const int k = kd(rng);
    const int max_d = n - k - 1;
    if (max_d < 0) continue;
    const int d = std::uniform_int_distribution<int>(0, max_d)(rng);
    Config c;
    c.v = rand_plane(rng, n, k);
    for (int i = 0; i <= d; ++i) c.simplex.push_back(rand_point(rng, n));
    if (d > 0 && (is_degenerate(c.simplex) || !simplex_transverse(c.simplex, c.v))) continue;
    c.p = rand_point(rng, n);
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      Point q = c.simplex[0];
      std::uniform_real_distribution<double> ud(-1.0, 1.0);
      for (size_t i = 1; i < c.simplex.size(); ++i) q += ud(rng) * (c.simplex[i] - c.simplex[0]);
      for (int j = 0; j < k; ++j) q += ud(rng) * c.v.basis().col(j);
      c.p = q;
    }
    return c;
  }
}

std::vector<Point> join(const Point& p, std::vector<Point> s) {
  s.insert(s.begin(), p);
  return s;
}

}  // namespace

TEST_CASE("simplex transversality examples") {
  CHECK_FALSE(simplex_transverse({Point{{0.0, 0.0}}, Point{{1.0, 0.0}}}, horizontal()));
  CHECK(simplex_transverse({Point{{0.0, 0.0}}, Point{{0.0, 1.0}}}, horizontal()));
  // a triangle has a non-horizontal edge, so it is transverse in the top dimension
  CHECK(simplex_transverse({Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.3, 1.0}}}, horizontal()));
  CHECK(code_of([] {
          simplex_transverse({Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{2.0, 0.0}}}, horizontal());
        }) == ErrorCode::DegenerateSimplex);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 2, k = 1 + trial % (n - 1), d = 1 + trial % n;
    const auto v = rand_plane(rng, n, k);
    std::vector<Point> s;
    for (int i = 0; i <= d; ++i) s.push_back(rand_point(rng, n));
    if (trial % 3 == 0) s[1] = s[0] + v.basis().col(0);
    if (is_degenerate(s)) continue;
    CHECK(simplex_transverse(s, v) == rank_definition(s, v));
  }
}

TEST_CASE("join projection criteria") {
  const auto ex = span({Point{{1.0, 0.0, 0.0}}});
  const std::vector<Point> origin{Point{{0.0, 0.0, 0.0}}};
  CHECK(join_transverse_by_projection(Point{{7.0, 0.0, 1.0}}, origin, ex));
  CHECK_FALSE(join_transverse_by_projection(Point{{7.0, 0.0, 0.0}}, origin, ex));
  // an edge transverse to the x-axis, and apexes on and off the projected span
  const std::vector<Point> edge{Point{{0.0, 0.0, 0.0}}, Point{{0.5, 1.0, 0.0}}};
  CHECK_FALSE(join_transverse_by_projection(Point{{3.0, 2.0, 0.0}}, edge, ex));
  CHECK(join_transverse_by_projection(Point{{3.0, 2.0, 0.4}}, edge, ex));
  CHECK(code_of([&] {
          join_transverse_by_projection(Point{{0.0, 0.0, 1.0}},
                                        {Point{{0.0, 0.0, 0.0}}, Point{{1.0, 0.0, 0.0}}}, ex);
        }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("projection criteria agree with the rank definition") {
  std::mt19937_64 rng(17);
  int positives = 0, negatives = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_config(rng, 3 + trial % 2);
    const bool q = projection_criterion_quotient(c.p, c.simplex, c.v);
    const bool d = projection_criterion_dual(c.p, c.simplex, c.v);
    const auto j = join(c.p, c.simplex);
    const bool def = !is_degenerate(j) && rank_definition(j, c.v);
    CHECK(q == d);
    CHECK(q == def);
    CHECK(join_transverse_by_projection(c.p, c.simplex, c.v) == def);
    (def ? positives : negatives)++;
  }
  CHECK(positives > 100);
  CHECK(negatives > 100);
}

TEST_CASE("semitransversality margin") {
  CHECK(semitrans_margin(Point{{0.0, 3.0}}, {Point{{0.0, 0.0}}}, horizontal()) == doctest::Approx(3.0));
  CHECK(semitrans_margin(Point{{5.0, 0.0}}, {Point{{0.0, 0.0}}}, horizontal()) == doctest::Approx(0.0));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_config(rng, 4);
    const double d = semitrans_margin(c.p, c.simplex, c.v);
    for (double l : {0.5, 3.0}) {
      std::vector<Point> s;
      for (const auto& x : c.simplex) s.push_back(l * x);
      CHECK(semitrans_margin(l * c.p, s, c.v) == doctest::Approx(l * d).epsilon(1e-9));
    }
  }
}

TEST_CASE("semitransversality soundness") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_config(rng, 3 + trial % 2);
    const auto w = semitrans_witness(c.p, c.simplex, c.v);
    if (w.delta < 1e-6) continue;
    ++checked;
    for (int s = 0; s < 50; ++s) {
      Point u = rand_point(rng, c.p.size());
      u *= 0.99 * w.delta * std::uniform_real_distribution<double>(0.0, 1.0)(rng) / u.norm();
      const auto j = join(c.p + u, c.simplex);
      CHECK_FALSE(is_degenerate(j));
      CHECK(rank_definition(j, c.v));
    }
    CHECK(w.direction.norm() == doctest::Approx(1.0));
    const auto bad = join(c.p + w.delta * w.direction, c.simplex);
    CHECK((is_degenerate(bad, 1e-7) || !rank_definition(bad, c.v) ||
           semitrans_margin(c.p + w.delta * w.direction, c.simplex, c.v) < 1e-9 * w.delta));
  }
  CHECK(checked > 100);
}

TEST_CASE("eps margin examples") {
  CHECK(eps_margin({Point{{0.0, 0.0}}, Point{{0.0, 1.0}}}, horizontal()) == doctest::Approx(1.0));
  CHECK(eps_margin({Point{{0.0, 0.0}}, Point{{1.0, 1.0}}}, horizontal()) ==
        doctest::Approx(std::sin(M_PI / 4)));
  CHECK(code_of([] { eps_margin({Point{{0.0, 0.0}}, Point{{1.0, 0.0}}}, horizontal()); }) ==
        ErrorCode::NotTransverse);
  // in the plane the only bad line is V itself, so the bound is exact
  for (double a : {0.1, 0.7, 1.3, 2.9}) {
    const double m = eps_margin({Point{{0.0, 0.0}}, Point{{std::cos(a), std::sin(a)}}}, horizontal());
    CHECK(m == doctest::Approx(std::abs(std::sin(a))));
  }
}

TEST_CASE("eps margin is a lower bound on the distance to bad planes") {
  std::mt19937_64 rng(31);
  // a line against a 2-plane V in R^3: the bad lines are those inside V
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = rand_plane(rng, 3, 2);
    const std::vector<Point> edge{Point::Zero(3), rand_point(rng, 3)};
    const double m = eps_margin(edge, v);
    const auto w = tangent_plane(edge);
    double best = 1.0;
    for (int i = 0; i < 20000; ++i) {
      const double t = M_PI * i / 20000.0;
      const Point u = std::cos(t) * v.basis().col(0) + std::sin(t) * v.basis().col(1);
      best = std::min(best, d_proj(w, span({u})));
    }
    CHECK(m <= best + 1e-9);
  }
  // random planes inside the margin stay transverse
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4, k = 2;
    const auto v = rand_plane(rng, n, k);
    const std::vector<Point> tri{rand_point(rng, n), rand_point(rng, n), rand_point(rng, n)};
    if (is_degenerate(tri) || !simplex_transverse(tri, v)) continue;
    const double m = eps_margin(tri, v);
    const auto g = tangent_plane(tri);
    for (int s = 0; s < 20; ++s) {
      Matrix t(n - 2, 2);
      for (int i = 0; i < n - 2; ++i)
        for (int j = 0; j < 2; ++j) t(i, j) = std::normal_distribution<double>()(rng);
      t *= std::uniform_real_distribution<double>(0.0, 2.0 * m)(rng) / operator_norm(t);
      const auto d = plane_from_matrix(g.basis() + g.complement() * t);
      if (d_proj(g, d) < m) CHECK(is_transverse_planes(d, v));
    }
  }
}

TEST_CASE("stratified transversality") {
  const std::vector<Point> tri{Point{{0.0, 0.0}}, Point{{2.0, 1.0}}, Point{{0.5, 2.0}}};
  CHECK(stratified_transverse(tri, horizontal()));
  CHECK(stratified_transverse({Point{{0.0, 0.0}}, Point{{0.0, 1.0}}}, horizontal()));
  CHECK_FALSE(stratified_transverse({Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.0, 1.0}}}, horizontal()));
  // splitting the triangle at a point level with a vertex creates a horizontal edge
  const auto k = SimplicialComplex::build(2, {tri[0], tri[1], tri[2], Point{{0.25, 1.0}}},
                                          {{0, 1, 3}, {1, 2, 3}});
  CHECK_FALSE(stratified_transverse(k, k.vertices(), horizontal()));
  const auto xi = Distribution::constant(horizontal());
  ReportOptions opt;
  opt.notion = Notion::Transverse;
  CHECK(build_report(k, k.vertices(), xi, opt).pass);
  opt.notion = Notion::Stratified;
  CHECK_FALSE(build_report(k, k.vertices(), xi, opt).pass);
}

TEST_CASE("general position") {
  const std::vector<Point> tri{Point{{0.0, 0.0}}, Point{{2.0, 1.0}}, Point{{0.5, 2.0}}};
  const auto xi = Distribution::constant(horizontal());
  CHECK(general_position(tri, xi).ok == stratified_transverse(tri, horizontal()));
  CHECK(general_position({Point{{0.0, 0.0}}, Point{{1.0, 0.0}}, Point{{0.0, 1.0}}}, xi).ok == false);
  // the line field at angle x turns through 135 degrees along the 45 degree
  // edge and is parallel to it at the lattice point x = pi/4
  const auto rotor = Distribution::builtin("planar_rotor(1)");
  const double a = 3.0 * M_PI / 4.0;
  const auto bad = general_position({Point{{0.0, 0.0}}, Point{{a, a}}, Point{{0.0, 1.0}}}, rotor);
  CHECK_FALSE(bad.ok);
  const auto good =
      general_position({Point{{1.0, 0.0}}, Point{{1.1, 0.5}}, Point{{0.9, 0.6}}},
                       Distribution::builtin("planar_rotor(0.1)"));
  CHECK(good.ok);
  CHECK(good.margin > 0.0);
}

TEST_CASE("oscillation") {
  std::vector<Point> line;
  for (int i = 0; i <= 200; ++i) line.push_back(Point{{0.005 * i, 0.0}});
  CHECK(oscillation(Distribution::constant(horizontal()), line, 0.5) == 0.0);
  const auto rotor = Distribution::builtin("planar_rotor(1)");
  // lines at angle difference t are sin t apart
  CHECK(oscillation(rotor, line, 0.1 + 1e-12) == doctest::Approx(std::sin(0.1)).epsilon(1e-9));
  double prev = 0.0;
  for (double r : {0.01, 0.02, 0.04, 0.08, 0.16, 0.32}) {
    const double b = oscillation(rotor, line, r);
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("margin transfer arithmetic") {
  TransferInput in;
  in.gamma = 1.0;
  in.beta = 0.1;
  in.r = 2.0;
  CHECK(transfer_margins(TransferKind::FolChange, in) == doctest::Approx(0.8));
  CHECK(transfer_margins(TransferKind::SimplexChange, in) == doctest::Approx(0.6));
  in.beta = 0.0;
  CHECK(transfer_margins(TransferKind::FolChange, in) == doctest::Approx(1.0));
  CHECK(transfer_margins(TransferKind::SimplexChange, in) == doctest::Approx(1.0));
  in.beta = 1.0;
  CHECK(transfer_margins(TransferKind::SimplexChange, in) == 0.0);
  in.shape = {0.5, 2.0, 3.0};
  in.delta = 1.2;
  CHECK(transfer_margins(TransferKind::Zeta, in) == doctest::Approx(0.2));
  in.delta = 0.2;
  CHECK(transfer_margins(TransferKind::EpsFromZeta, in) == doctest::Approx(0.1));
}

TEST_CASE("vertex perturbations move the tangent plane proportionally") {
  std::mt19937_64 rng(12);
  const std::vector<Point> tri{Point{{0.0, 0.0, 0.0}}, Point{{1.0, 0.1, 0.0}}, Point{{0.2, 0.9, 0.0}}};
  const auto s = shape_stats(tri);
  const auto g = tangent_plane(tri);
  for (double zeta : {0.1, 0.03, 0.01}) {
    REQUIRE(zeta < std::min(s.rmin / 2.0, 1.0 / s.lambda));
    for (int trial = 0; trial < 200; ++trial) {
      auto moved = tri;
      for (auto& p : moved) {
        Point u = rand_point(rng, 3);
        p += zeta * std::uniform_real_distribution<double>(0.0, 1.0)(rng) * u / u.norm();
      }
      CHECK(d_proj(g, tangent_plane(moved)) < 10.0 * zeta * s.lambda);
    }
    // lift one vertex out of the plane
    auto lifted = tri;
    lifted[2](2) += zeta;
    CHECK(d_proj(g, tangent_plane(lifted)) > 0.01 * zeta / s.rmax);
  }
}

TEST_CASE("margins of a scaled configuration") {
  // one shape at scales 1/L: semitransversality margins scale with it,
  // eps margins of the faces do not
  const auto v = span({Point{{1.0, 0.0, 0.0}}});
  const std::vector<Point> base{Point{{0.0, 0.0, 0.0}}, Point{{0.3, 1.0, 0.1}}, Point{{0.6, 0.2, 1.0}}};
  double lo = 1e9, hi = 0.0;
  for (double l : {1.0, 2.0, 4.0, 8.0}) {
    std::vector<Point> t;
    for (const auto& p : base) t.push_back(p / l);
    CHECK(semitrans_margin(t[2], {t[0], t[1]}, v) ==
          doctest::Approx(semitrans_margin(base[2], {base[0], base[1]}, v) / l));
    double m = 1e9;
    for (const auto& f : faces_of({0, 1, 2})) {
      if (f.size() < 2) continue;
      std::vector<Point> pts;
      for (int i : f) pts.push_back(t[static_cast<size_t>(i)]);
      m = std::min(m, eps_margin(pts, v));
    }
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  CHECK(hi < 2.0 * lo);
}
