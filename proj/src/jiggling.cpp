#include "jigglekit/jiggling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "jigglekit/error.hpp"
#include "jigglekit/perturbation.hpp"

namespace jigglekit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t v) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (v + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool subset_of(const Simplex& a, const Simplex& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Vertex-by-vertex induction shared by all jiggling modes.
struct Induction {
  const SimplicialComplex* k = nullptr;
  std::vector<Point> start;
  std::vector<int> order;
  std::vector<bool> frozen;
  int max_join = 0;
  std::function<std::vector<Plane>(int)> foliations;
  std::function<bool(int, int, const Simplex&)> pairs;
  std::function<std::optional<AffineFlat>(int)> constraint;
  std::function<double(int, const std::vector<Point>&)> budget;
  std::function<bool(const Simplex&)> drop;
  std::function<double(int, const std::vector<Point>&)> incumbent_extra;
  double floor_cap = kInf;
  double floor_fraction = 0.125;
  std::uint64_t seed = 1;
  int samples = 128;
};

struct InductionResult {
  std::vector<Point> images;
  int moved = 0;
};

std::vector<Simplex> processed_link(const Induction& in, int v, const std::vector<bool>& done) {
  std::set<Simplex> out;
  const auto& k = *in.k;
  for (int t : k.tops_at(v)) {
    Simplex opp;
    for (int w : k.top_simplices()[t])
      if (w != v && done[w]) opp.push_back(w);
    const unsigned count = static_cast<unsigned>(opp.size());
    for (unsigned mask = 1; mask < (1u << count); ++mask) {
      Simplex s;
      for (unsigned j = 0; j < count; ++j)
        if (mask & (1u << j)) s.push_back(opp[j]);
      if (static_cast<int>(s.size()) > in.max_join) continue;
      if (in.drop && in.drop(s)) continue;
      out.insert(std::move(s));
    }
  }
  return {out.begin(), out.end()};
}

InductionResult run_induction(const Induction& in) {
  InductionResult res;
  res.images = in.start;
  std::vector<bool> done = in.frozen;
  for (int v : in.order) {
    if (in.frozen[v]) continue;
    const auto fols = in.foliations(v);
    if (fols.empty()) {
      done[v] = true;
      continue;
    }
    const auto link = processed_link(in, v, done);
    PerturbationRequest req;
    req.p = res.images[v];
    req.budget = in.budget(v, res.images);
    if (!(req.budget > 0.0))
      throw Error(ErrorCode::PerturbationFailed,
                  "no room to move vertex " + std::to_string(v));
    for (const auto& s : link) {
      std::vector<Point> pts;
      for (int w : s) pts.push_back(res.images[w]);
      req.star_simplices.push_back(std::move(pts));
    }
    req.foliations = fols;
    if (in.pairs) {
      req.pairing.assign(fols.size(), {});
      for (size_t u = 0; u < fols.size(); ++u)
        for (size_t i = 0; i < link.size(); ++i)
          if (in.pairs(v, static_cast<int>(u), link[i]))
            req.pairing[u].push_back(static_cast<int>(i));
    }
    if (in.constraint) req.constraint = in.constraint(v);
    req.seed = mix_seed(in.seed, static_cast<std::uint64_t>(v));
    req.samples = in.samples;
    double thr = std::min(in.floor_cap, in.floor_fraction * req.budget);
    if (in.incumbent_extra) thr = std::max(thr, in.incumbent_extra(v, res.images));
    req.accept_incumbent_above = thr;
    PerturbationResult pr;
    try {
      pr = perturb_vertex(req);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StarNotTransverse)
        throw Error(ErrorCode::PerturbationFailed,
                    "vertex " + std::to_string(v) + ": " + e.what());
      throw;
    }
    if (!link.empty() && !(pr.achieved_delta > 0.0))
      throw Error(ErrorCode::PerturbationFailed,
                  "no semitransverse position for vertex " + std::to_string(v));
    if (!pr.kept_incumbent && pr.p != req.p) ++res.moved;
    res.images[v] = pr.p;
    done[v] = true;
  }
  return res;
}

double max_gradient_sum(const SimplicialComplex& k) {
  double g = 0.0;
  for (const auto& t : k.top_simplices())
    if (t.size() > 1) g = std::max(g, gradient_sum(k.points(t)));
  return g;
}

// 2 beta r with beta the variation of xi between v and its neighbours.
std::function<double(int, const std::vector<Point>&)> oscillation_threshold(
    const SimplicialComplex& k, const Distribution& xi, const std::vector<Point>& anchors) {
  if (xi.is_constant()) return nullptr;
  return [&k, &xi, &anchors](int v, const std::vector<Point>& cur) {
    const Plane here = xi.at(anchors[v]);
    double beta = 0.0, r = 0.0;
    std::set<int> seen;
    for (int t : k.tops_at(v))
      for (int w : k.top_simplices()[t]) {
        if (w == v || !seen.insert(w).second) continue;
        beta = std::max(beta, d_proj(here, xi.at(anchors[w])));
        r = std::max(r, (cur[w] - anchors[v]).norm());
      }
    return 2.0 * beta * r;
  };
}

std::size_t top_count_at(const SimplicialComplex& k, int level) {
  std::size_t total = 0;
  for (const auto& t : k.top_simplices()) {
    const int m = static_cast<int>(t.size()) - 1;
    const double c = std::ldexp(1.0, level * m);
    if (c > 1e15) return std::numeric_limits<std::size_t>::max();
    total += static_cast<std::size_t>(c);
  }
  return total;
}

ReportOptions report_options(const JigglingConfig& cfg, const std::vector<Point>* anchors) {
  ReportOptions opt;
  opt.notion = Notion::Report;
  opt.sample_depth = cfg.sample_depth;
  opt.anchors = anchors;
  return opt;
}

JigglingOutcome jiggle_at_level(const PiecewiseMap& f, const Distribution& xi,
                                const JigglingConfig& cfg, int level) {
  if (xi.ambient_dim() != f.target_dim())
    throw Error(ErrorCode::AmbientMismatch, "distribution and map live in different spaces");
  auto sub = crystalline_subdivide(f.domain(), level);
  auto lin = linearize_on(f, sub);
  const auto& kl = lin->domain();
  const double scale = std::ldexp(1.0, -level);

  JigglingOutcome out;
  out.config = cfg;
  out.level = level;
  out.subdivision = sub.map;
  out.anchors = lin->images();

  if (cfg.gamma <= 0.0) {
    out.g = lin;
    out.report = build_report(kl, lin->images(), xi, report_options(cfg, &out.anchors));
    out.report.level = level;
    if (!out.report.pass)
      throw Error(ErrorCode::BudgetViolation, "zero budget and not in general position");
    out.distances = distances(f, *lin, cfg.sample_depth);
    return out;
  }

  const auto dlin = distances(f, *lin, cfg.sample_depth);
  const double room0 = cfg.gamma * scale - dlin.c0;
  const double room1 = cfg.gamma - dlin.c1;
  if (room0 <= 0.0 || room1 <= 0.0)
    throw Error(ErrorCode::BudgetViolation,
                "linearization at level " + std::to_string(level) + " uses the whole budget");
  const double eta = std::min({cfg.epsilon_vertex * scale, 0.9 * room0,
                               0.9 * room1 / (1.0 + max_gradient_sum(kl))});
  out.vertex_budget = eta;

  Induction in;
  in.k = &kl;
  in.start = lin->images();
  in.order.resize(static_cast<size_t>(kl.num_vertices()));
  std::iota(in.order.begin(), in.order.end(), 0);
  in.frozen.assign(in.order.size(), false);
  in.max_join = xi.ambient_dim() - xi.rank();
  in.foliations = [&](int v) { return std::vector<Plane>{xi.at(out.anchors[v])}; };
  in.budget = [eta](int, const std::vector<Point>&) { return eta; };
  in.incumbent_extra = oscillation_threshold(kl, xi, out.anchors);
  in.floor_cap = cfg.margin_floor * scale;
  in.seed = cfg.seed;
  in.samples = cfg.search_samples;
  auto res = run_induction(in);

  out.g = std::make_shared<PLMap>(lin->domain_ptr(), std::move(res.images));
  out.moved_vertices = res.moved;
  if (!is_piecewise_embedding(*out.g, cfg.degeneracy_tol))
    throw Error(ErrorCode::EmbeddingLost, "perturbed map is not a piecewise embedding");
  out.report = build_report(kl, out.g->images(), xi, report_options(cfg, &out.anchors));
  out.report.level = level;
  if (!out.report.pass)
    throw Error(ErrorCode::PerturbationFailed,
                "general position not reached at level " + std::to_string(level));
  out.distances = distances(f, *out.g, cfg.sample_depth);
  if (!(out.distances.c0 < cfg.gamma * scale) || !(out.distances.c1 < cfg.gamma))
    throw Error(ErrorCode::BudgetViolation, "jiggle exceeds the budget");
  return out;
}

}  // namespace

int auto_level(const PiecewiseMap& f, const Distribution& xi, const JigglingConfig& cfg) {
  for (int level = std::max(0, cfg.min_level); level <= cfg.max_level; ++level) {
    if (top_count_at(f.domain(), level) > cfg.max_simplices) break;
    auto sub = crystalline_subdivide(f.domain(), level);
    auto lin = linearize_on(f, sub);
    const double scale = std::ldexp(1.0, -level);
    const auto d = distances(f, *lin, cfg.sample_depth);
    if (cfg.gamma > 0.0 && (d.c1 >= cfg.gamma / 2.0 || d.c0 >= cfg.gamma * scale / 2.0)) continue;
    if (xi.is_constant()) return level;
    const auto& kl = lin->domain();
    bool ok = true;
    for (const auto& t : kl.top_simplices()) {
      const auto pts = lin->image_points(t);
      const double rmax = raw_shape_stats(pts).rmax;
      if (rmax <= 0.0) continue;
      const double beta = oscillation(xi, lattice_points(pts, 2), kInf);
      if (!(beta < cfg.margin_floor / (4.0 * rmax / scale))) {
        ok = false;
        break;
      }
    }
    if (ok) return level;
  }
  throw Error(ErrorCode::LevelExhausted,
              "no level up to " + std::to_string(cfg.max_level) + " meets the budgets");
}

JigglingOutcome jiggle_euclidean(const PiecewiseMap& f, const Distribution& xi,
                                 const JigglingConfig& cfg) {
  if (cfg.level >= 0 || cfg.gamma <= 0.0) return jiggle_at_level(f, xi, cfg, std::max(cfg.level, 0));
  const int first = auto_level(f, xi, cfg);
  for (int level = first;; ++level) {
    const bool last =
        level >= cfg.max_level || top_count_at(f.domain(), level + 1) > cfg.max_simplices;
    try {
      return jiggle_at_level(f, xi, cfg, level);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PerturbationFailed || last) throw;
    }
  }
}

std::vector<JigglingOutcome> jiggle_tower(const PiecewiseMap& f, const Distribution& xi,
                                          const JigglingConfig& cfg,
                                          const std::vector<int>& levels) {
  std::vector<JigglingOutcome> out;
  for (int level : levels) {
    JigglingConfig c = cfg;
    c.level = level;
    out.push_back(jiggle_euclidean(f, xi, c));
  }
  return out;
}

namespace {

Distribution pullback_one(const std::shared_ptr<const PLMap>& f, int t, const Distribution& xi) {
  const Matrix& j = f->jacobian(t);
  if (j.rows() != j.cols() || numerical_rank(j) < j.rows())
    throw Error(ErrorCode::PreconditionViolated,
                "pullback needs an invertible affine piece on simplex " + std::to_string(t));
  const Matrix jinv = j.inverse();
  if (xi.is_constant())
    return Distribution::constant(
        plane_from_matrix(jinv * xi.at(Point::Zero(xi.ambient_dim())).basis()));
  return Distribution::custom(
      f->domain().ambient_dim(), xi.rank(),
      [f, t, jinv, xi](const Point& x) {
        return plane_from_matrix(jinv * xi.at(f->value(x, t)).basis());
      },
      "pullback(" + xi.name() + ")");
}

}  // namespace

TopDistributions pullback_distributions(const PLMap& f, const Distribution& xi) {
  if (xi.ambient_dim() != f.target_dim())
    throw Error(ErrorCode::AmbientMismatch, "distribution and map live in different spaces");
  auto shared = std::make_shared<const PLMap>(f);
  TopDistributions out;
  for (int t = 0; t < static_cast<int>(f.domain().top_simplices().size()); ++t)
    out.emplace_back(pullback_one(shared, t, xi));
  return out;
}

SubdivisionJiggle jiggle_subdivision(const SimplicialComplex& k, const SimplicialComplex& refined,
                                     const TopDistributions& xi, const JigglingConfig& cfg) {
  const int ntop = static_cast<int>(k.top_simplices().size());
  if (static_cast<int>(xi.size()) != ntop)
    throw Error(ErrorCode::PreconditionViolated, "one distribution slot per maximal simplex");
  if (refined.ambient_dim() != k.ambient_dim())
    throw Error(ErrorCode::AmbientMismatch, "subdivision lives in a different space");
  for (int t = 0; t < ntop; ++t) {
    if (!xi[t]) continue;
    if (xi[t]->ambient_dim() != k.ambient_dim())
      throw Error(ErrorCode::AmbientMismatch, "distribution lives in a different space");
    if (!general_position(k.points(k.top_simplices()[t]), *xi[t], cfg.sample_depth).ok)
      throw Error(ErrorCode::PreconditionViolated,
                  "maximal simplex " + std::to_string(t) + " not stratified transverse");
  }

  const int level = std::max(cfg.level, 0);
  auto bary = barycentric_subdivide(refined);
  auto sub = crystalline_subdivide(bary.complex, level);
  auto k2 = std::make_shared<const SimplicialComplex>(std::move(sub.complex));
  const int nv = k2->num_vertices();

  SubdivisionJiggle out;
  out.level = level;
  Locator loc(k, 1e-9);
  out.carrier.resize(static_cast<size_t>(nv));
  out.to_k.vertex_weights.resize(static_cast<size_t>(nv));
  std::vector<std::vector<int>> tops_of(static_cast<size_t>(nv));
  for (int v = 0; v < nv; ++v) {
    const auto l = loc.locate(k2->vertex(v));
    if (l.top < 0)
      throw Error(ErrorCode::SkeletonViolation, "subdivision vertex outside |K|");
    out.carrier[v] = l.carrier;
    for (size_t j = 0; j < l.carrier.size(); ++j)
      out.to_k.vertex_weights[v].emplace_back(l.carrier[j], l.weights[j]);
    for (int t : k.tops_at(l.carrier.front()))
      if (subset_of(l.carrier, k.top_simplices()[t])) tops_of[v].push_back(t);
  }

  out.order.resize(static_cast<size_t>(nv));
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    return out.carrier[a].size() < out.carrier[b].size();
  });
  std::vector<int> rank(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) rank[out.order[i]] = i;

  // foliation slots per vertex: maximal simplices of K with a distribution
  std::vector<std::vector<int>> slots(static_cast<size_t>(nv));
  int max_join = 0;
  for (int v = 0; v < nv; ++v)
    for (int t : tops_of[v])
      if (xi[t]) {
        slots[v].push_back(t);
        max_join = std::max(max_join, xi[t]->ambient_dim() - xi[t]->rank());
      }

  const std::vector<Point>& start = k2->vertices();
  Induction in;
  in.k = k2.get();
  in.start = start;
  in.order = out.order;
  in.frozen.assign(static_cast<size_t>(nv), false);
  for (int v = 0; v < nv; ++v) in.frozen[v] = out.carrier[v].size() < 2;
  in.max_join = max_join;
  in.foliations = [&](int v) {
    std::vector<Plane> p;
    for (int t : slots[v]) p.push_back(xi[t]->at(start[v]));
    return p;
  };
  in.pairs = [&](int v, int u, const Simplex& s) {
    const Simplex& top = k.top_simplices()[slots[v][u]];
    return std::all_of(s.begin(), s.end(),
                       [&](int w) { return subset_of(out.carrier[w], top); });
  };
  in.constraint = [&](int v) {
    return std::optional<AffineFlat>(
        AffineFlat{start[v], tangent_plane(k.points(out.carrier[v]))});
  };
  in.budget = [&](int v, const std::vector<Point>& cur) {
    double h = kInf;
    for (int t : k2->tops_at(v)) {
      std::vector<Point> opp;
      for (int w : k2->top_simplices()[t])
        if (w != v) opp.push_back(cur[w]);
      h = std::min(h, affine_span_distance(opp, cur[v]));
    }
    const Simplex& c = out.carrier[v];
    for (size_t drop = 0; drop < c.size(); ++drop) {
      std::vector<Point> facet;
      for (size_t j = 0; j < c.size(); ++j)
        if (j != drop) facet.push_back(k.vertex(c[j]));
      h = std::min(h, affine_span_distance(facet, cur[v]));
    }
    return cfg.epsilon_vertex * h;
  };
  in.seed = cfg.seed;
  in.samples = cfg.search_samples;
  auto res = run_induction(in);
  out.moved_vertices = res.moved;

  for (int v = 0; v < nv; ++v) {
    const auto pts = k.points(out.carrier[v]);
    const auto bc = barycentric(pts, res.images[v]);
    const double size = pts.size() > 1 ? raw_shape_stats(pts).rmax : 1.0;
    if (bc.residual > 1e-12 * std::max(1.0, size) || bc.coords.minCoeff() < -1e-12)
      throw Error(ErrorCode::SkeletonViolation,
                  "vertex " + std::to_string(v) + " left its carrier face");
  }

  std::vector<double> volume(static_cast<size_t>(ntop), 0.0);
  std::vector<std::vector<int>> members(static_cast<size_t>(ntop));
  for (int i = 0; i < static_cast<int>(k2->top_simplices().size()); ++i) {
    const Simplex& s = k2->top_simplices()[i];
    Simplex carrier;
    for (int w : s) carrier.insert(carrier.end(), out.carrier[w].begin(), out.carrier[w].end());
    std::sort(carrier.begin(), carrier.end());
    carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
    int home = -1;
    for (int t : k.tops_at(carrier.front()))
      if (subset_of(carrier, k.top_simplices()[t])) home = t;
    if (home < 0) throw Error(ErrorCode::SkeletonViolation, "simplex spans several cells of K");
    std::vector<Point> img;
    for (int w : s) img.push_back(res.images[w]);
    if (is_degenerate(img, cfg.degeneracy_tol))
      throw Error(ErrorCode::VolumeMismatch, "degenerate image simplex");
    volume[home] += simplex_volume(img);
    members[home].push_back(i);
  }
  for (int t = 0; t < ntop; ++t) {
    const double want = simplex_volume(k.points(k.top_simplices()[t]));
    if (std::abs(volume[t] - want) > 1e-9 * want)
      throw Error(ErrorCode::VolumeMismatch,
                  "images do not tile maximal simplex " + std::to_string(t));
  }

  out.t = std::make_shared<PLMap>(k2, res.images);
  TransversalityReport& rep = out.report;
  rep.level = level;
  rep.pass = true;
  rep.certified = true;
  rep.min_semitrans = kInf;
  rep.min_eps = kInf;
  bool any = false;
  for (int t = 0; t < ntop; ++t) {
    if (!xi[t] || members[t].empty()) continue;
    ReportOptions opt = report_options(cfg, &start);
    opt.order_rank = &rank;
    opt.only_tops = members[t];
    const auto r = build_report(*k2, res.images, *xi[t], opt);
    any = true;
    rep.records.insert(rep.records.end(), r.records.begin(), r.records.end());
    rep.min_semitrans = std::min(rep.min_semitrans, r.min_semitrans);
    rep.min_eps = std::min(rep.min_eps, r.min_eps);
    rep.pass = rep.pass && r.pass;
    rep.sampled = rep.sampled || r.sampled;
    rep.certified = rep.certified && r.certified;
  }
  if (!any) rep.min_semitrans = rep.min_eps = 0.0;
  if (!rep.pass)
    throw Error(ErrorCode::PerturbationFailed, "subdivision not in general position");
  return out;
}

SubdivisionJiggle jiggle_subdivision(const PLMap& f, const SimplicialComplex& refined,
                                     const Distribution& xi, const JigglingConfig& cfg) {
  return jiggle_subdivision(f.domain(), refined, pullback_distributions(f, xi), cfg);
}

JigglingOutcome jiggle_relative(const PLMap& f, const Distribution& xi, const JigglingConfig& cfg,
                                const SimplexSet& a, const SimplexSet& b, double collar) {
  const auto& k = f.domain();
  for (const auto* q : {&a, &b})
    for (const auto& s : *q)
      if (!k.contains(s)) throw Error(ErrorCode::QueryNotInComplex, "subcomplex not in K");
  const SimplexSet ca = closure(a), cb = closure(b);
  std::vector<bool> in_a_vertex(static_cast<size_t>(k.num_vertices()), false);
  for (const auto& s : ca)
    for (int v : s) in_a_vertex[v] = true;

  if (xi.ambient_dim() != f.target_dim())
    throw Error(ErrorCode::AmbientMismatch, "distribution and map live in different spaces");
  TopDistributions dists(k.top_simplices().size());
  auto shared = std::make_shared<const PLMap>(f);
  for (size_t t = 0; t < dists.size(); ++t) {
    const Simplex& top = k.top_simplices()[t];
    if (std::any_of(top.begin(), top.end(), [&](int v) { return in_a_vertex[v]; }))
      dists[t] = pullback_one(shared, static_cast<int>(t), xi);
  }

  auto bary = barycentric_subdivide(k);

  // level: str(B) of the final complex must stay within the collar
  auto collar_ok = [&](int level) {
    if (cb.empty()) return true;
    auto b2 = barycentric_subdivide(bary.complex);
    auto cr = crystalline_subdivide(b2.complex, level);
    const auto to_k = compose(compose(bary.map, b2.map), cr.map);
    const auto& kc = cr.complex;
    for (const auto& t : kc.top_simplices()) {
      bool touches = false;
      for (int v : t) {
        Simplex c;
        for (const auto& [p, w] : to_k.vertex_weights[v]) c.push_back(p);
        std::sort(c.begin(), c.end());
        touches = touches || cb.count(c) > 0;
      }
      if (touches && raw_shape_stats(kc.points(t)).rmax > collar) return false;
    }
    return true;
  };
  int level = std::max(cfg.level, cfg.min_level);
  level = std::max(level, 0);
  while (!collar_ok(level)) {
    if (cfg.level >= 0 || level >= cfg.max_level)
      throw Error(ErrorCode::CollarTooSmall,
                  "star of B reaches beyond the collar at level " + std::to_string(level));
    ++level;
  }

  JigglingConfig sub_cfg = cfg;
  sub_cfg.level = level;
  auto sj = jiggle_subdivision(k, bary.complex, dists, sub_cfg);
  const auto& k2 = sj.t->domain();
  auto k_out = std::make_shared<const SimplicialComplex>(
      SimplicialComplex::trusted(k.ambient_dim(), sj.t->images(), k2.top_simplices()));
  const int nv = k_out->num_vertices();

  std::vector<bool> frozen(static_cast<size_t>(nv), false), b_vertex(static_cast<size_t>(nv), false);
  for (int v = 0; v < nv; ++v) {
    const bool in_a = ca.count(sj.carrier[v]) > 0;
    const bool in_b = cb.count(sj.carrier[v]) > 0;
    frozen[v] = in_a || in_b;
    b_vertex[v] = in_b && !in_a;
  }

  JigglingOutcome out;
  out.config = cfg;
  out.level = level;
  out.subdivision = sj.to_k;
  for (int v = 0; v < nv; ++v) out.anchors.push_back(evaluate(f, k_out->vertex(v)));

  const double scale = std::ldexp(1.0, -level);
  const double eta =
      cfg.gamma > 0.0 ? std::min({cfg.epsilon_vertex * scale, 0.9 * cfg.gamma * scale,
                                  0.9 * cfg.gamma / (1.0 + max_gradient_sum(*k_out))})
                      : 0.0;
  out.vertex_budget = eta;

  std::vector<int> only;
  for (int i = 0; i < static_cast<int>(k_out->top_simplices().size()); ++i) {
    const Simplex& t = k_out->top_simplices()[i];
    if (std::none_of(t.begin(), t.end(), [&](int v) { return b_vertex[v]; })) only.push_back(i);
  }

  auto finish = [&](std::vector<Point> images) {
    out.g = std::make_shared<PLMap>(k_out, std::move(images));
    ReportOptions opt = report_options(cfg, &out.anchors);
    opt.only_tops = only;
    if (only.empty()) {
      out.report.pass = true;
    } else {
      out.report = build_report(*k_out, out.g->images(), xi, opt);
    }
    out.report.level = level;
  };

  if (cfg.gamma <= 0.0) {
    finish(out.anchors);
    if (!out.report.pass)
      throw Error(ErrorCode::BudgetViolation, "zero budget and not in general position");
    out.distances = distances(f, *out.g, cfg.sample_depth);
    return out;
  }

  Induction in;
  in.k = k_out.get();
  in.start = out.anchors;
  in.order.resize(static_cast<size_t>(nv));
  std::iota(in.order.begin(), in.order.end(), 0);
  in.frozen = frozen;
  in.max_join = xi.ambient_dim() - xi.rank();
  in.foliations = [&](int v) { return std::vector<Plane>{xi.at(out.anchors[v])}; };
  in.budget = [eta](int, const std::vector<Point>&) { return eta; };
  in.drop = [&](const Simplex& s) {
    return std::any_of(s.begin(), s.end(), [&](int w) { return b_vertex[w]; });
  };
  in.incumbent_extra = oscillation_threshold(*k_out, xi, out.anchors);
  in.floor_cap = cfg.margin_floor * scale;
  in.seed = cfg.seed;
  in.samples = cfg.search_samples;
  auto res = run_induction(in);
  out.moved_vertices = res.moved;
  finish(std::move(res.images));

  if (!is_piecewise_embedding(*out.g, cfg.degeneracy_tol))
    throw Error(ErrorCode::EmbeddingLost, "perturbed map is not a piecewise embedding");
  if (!out.report.pass)
    throw Error(ErrorCode::PerturbationFailed, "general position not reached outside the collar");
  out.distances = distances(f, *out.g, cfg.sample_depth);
  if (!(out.distances.c0 < cfg.gamma * scale) || !(out.distances.c1 < cfg.gamma))
    throw Error(ErrorCode::BudgetViolation, "jiggle exceeds the budget");
  return out;
}

}  // namespace jigglekit
