#include "jigglekit/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "jigglekit/error.hpp"

namespace jigglekit::io {
namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double num_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) parse_fail("expected a number");
  return j.get<double>();
}

Json point_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

Point point_from(const Json& j) {
  if (!j.is_array()) parse_fail("expected a coordinate array");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) parse_fail("coordinates must be numbers");
    p(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return p;
}

std::vector<Point> points_from(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array of points");
  std::vector<Point> out;
  for (const auto& e : j) out.push_back(point_from(e));
  return out;
}

Json points_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

std::vector<Simplex> simplices_from(const Json& j) {
  if (!j.is_array()) parse_fail("expected an array of simplices");
  std::vector<Simplex> out;
  for (const auto& s : j) {
    if (!s.is_array()) parse_fail("a simplex is an array of vertex indices");
    Simplex v;
    for (const auto& i : s) {
      if (!i.is_number_integer()) parse_fail("vertex indices must be integers");
      v.push_back(i.get<int>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

Json basis_json(const Plane& p) {
  Json a = Json::array();
  for (Eigen::Index c = 0; c < p.basis().cols(); ++c) a.push_back(point_json(p.basis().col(c)));
  return a;
}

Plane plane_from(const Json& j, int n) {
  const auto vecs = points_from(j);
  for (const auto& v : vecs)
    if (v.size() != n) throw Error(ErrorCode::AmbientMismatch, "basis vector of wrong length");
  return plane_from_spanning(vecs, n);
}

std::string notion_key(Notion n) {
  switch (n) {
    case Notion::Transverse: return "transverse";
    case Notion::Stratified: return "stratified";
    case Notion::GeneralPosition: return "general-position";
    case Notion::Report: return "report";
  }
  return "report";
}

Notion notion_from(const std::string& s) {
  for (Notion n : {Notion::Transverse, Notion::Stratified, Notion::GeneralPosition, Notion::Report})
    if (notion_key(n) == s) return n;
  throw Error(ErrorCode::ValidationError, "unknown notion '" + s + "'");
}

int builtin_arg(const std::smatch& m, int lo, int hi, const std::string& name) {
  const int v = std::stoi(m[2].str());
  if (v < lo || v > hi)
    throw Error(ErrorCode::ValidationError, name + " parameter out of range");
  return v;
}

const std::regex& builtin_pattern() {
  static const std::regex re(
      R"(\s*(unit_square_grid|standard_simplex|strip|box_grid)\(\s*(\d+)\s*\)\s*)");
  return re;
}

SimplexSet simplex_set_from(const Json& j) {
  SimplexSet out;
  for (auto s : simplices_from(j)) {
    std::sort(s.begin(), s.end());
    out.insert(std::move(s));
  }
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    parse_fail(path.string() + ": malformed JSON at byte " + std::to_string(e.byte));
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path.string());
  out << dump(j);
}

Json to_json(const SimplicialComplex& k) {
  Json s = Json::array();
  for (const auto& t : k.top_simplices()) s.push_back(t);
  return {{"schema_version", kSchemaVersion},
          {"ambient_dim", k.ambient_dim()},
          {"vertices", points_json(k.vertices())},
          {"simplices", s}};
}

SimplicialComplex complex_from_json(const Json& j) {
  const Json& n = need(j, "ambient_dim");
  if (!n.is_number_integer()) parse_fail("ambient_dim must be an integer");
  return SimplicialComplex::build(n.get<int>(), points_from(need(j, "vertices")),
                                  simplices_from(need(j, "simplices")));
}

Json to_json(const SubdivisionMap& m) {
  Json a = Json::array();
  for (const auto& w : m.vertex_weights) {
    Json row = Json::array();
    for (const auto& [v, x] : w) row.push_back(Json::array({v, x}));
    a.push_back(row);
  }
  return {{"vertex_weights", a}};
}

SubdivisionMap subdivision_from_json(const Json& j) {
  SubdivisionMap m;
  for (const auto& row : need(j, "vertex_weights")) {
    std::vector<std::pair<int, double>> w;
    for (const auto& e : row) {
      if (!e.is_array() || e.size() != 2) parse_fail("weight entries are [vertex, weight]");
      w.emplace_back(e[0].get<int>(), e[1].get<double>());
    }
    m.vertex_weights.push_back(std::move(w));
  }
  return m;
}

Json to_json(const PLMap& f) {
  return {{"schema_version", kSchemaVersion},
          {"complex", to_json(f.domain())},
          {"target_dim", f.target_dim()},
          {"images", points_json(f.images())}};
}

std::shared_ptr<PLMap> plmap_from_json(const Json& j) {
  auto k = std::make_shared<const SimplicialComplex>(complex_from_json(need(j, "complex")));
  auto images = points_from(need(j, "images"));
  const int n = need(j, "target_dim").get<int>();
  if (static_cast<int>(images.size()) != k->num_vertices())
    throw Error(ErrorCode::ValidationError, "one image per vertex required");
  for (const auto& p : images)
    if (p.size() != n) throw Error(ErrorCode::AmbientMismatch, "image of wrong dimension");
  return std::make_shared<PLMap>(k, std::move(images));
}

Json to_json(const Distribution& xi) {
  switch (xi.kind()) {
    case DistributionKind::Constant:
      return {{"type", "constant"}, {"basis", basis_json(xi.sample_planes().front())}};
    case DistributionKind::Builtin:
      return {{"type", "builtin"}, {"name", xi.name()}, {"ambient_dim", xi.ambient_dim()}};
    case DistributionKind::Custom:
      throw Error(ErrorCode::ValidationError, "custom distributions are not serializable");
    case DistributionKind::Sampled: {
      Json planes = Json::array();
      for (const auto& p : xi.sample_planes()) planes.push_back(basis_json(p));
      return {{"type", "samples"}, {"points", points_json(xi.sample_points())}, {"planes", planes}};
    }
  }
  return {};
}

Distribution distribution_from_json(const Json& j, int ambient_dim) {
  const std::string type = need(j, "type").get<std::string>();
  if (type == "constant") {
    const auto vecs = points_from(need(j, "basis"));
    if (vecs.empty()) throw Error(ErrorCode::ValidationError, "empty basis");
    const int n = static_cast<int>(vecs.front().size());
    return Distribution::constant(plane_from(need(j, "basis"), n));
  }
  if (type == "builtin") {
    const int n = j.contains("ambient_dim") ? j.at("ambient_dim").get<int>() : ambient_dim;
    return Distribution::builtin(need(j, "name").get<std::string>(), n);
  }
  if (type == "samples") {
    auto pts = points_from(need(j, "points"));
    const Json& pl = need(j, "planes");
    if (!pl.is_array() || pl.size() != pts.size() || pts.empty())
      throw Error(ErrorCode::ValidationError, "one plane per sample point required");
    const int n = static_cast<int>(pts.front().size());
    std::vector<Plane> planes;
    for (const auto& b : pl) planes.push_back(plane_from(b, n));
    return Distribution::sampled(std::move(pts), std::move(planes));
  }
  throw Error(ErrorCode::ValidationError, "unknown distribution type '" + type + "'");
}

Json to_json(const TransversalityReport& r) {
  Json recs = Json::array();
  for (const auto& s : r.records)
    recs.push_back({{"simplex", s.simplex},
                    {"dim", s.dim},
                    {"semitrans_margin", num(s.semitrans_margin)},
                    {"eps_margin", num(s.eps_margin)},
                    {"degenerate", s.degenerate},
                    {"transverse", s.transverse},
                    {"stratified", s.stratified},
                    {"general_position", s.general_position},
                    {"certified", s.certified}});
  return {{"schema_version", TransversalityReport::kSchemaVersion},
          {"notion", notion_key(r.notion)},
          {"pass", r.pass},
          {"sampled", r.sampled},
          {"certified", r.certified},
          {"level", r.level},
          {"min_semitrans", num(r.min_semitrans)},
          {"min_eps", num(r.min_eps)},
          {"records", recs}};
}

TransversalityReport report_from_json(const Json& j) {
  TransversalityReport r;
  r.notion = notion_from(need(j, "notion").get<std::string>());
  r.pass = need(j, "pass").get<bool>();
  r.sampled = need(j, "sampled").get<bool>();
  r.certified = need(j, "certified").get<bool>();
  r.level = need(j, "level").get<int>();
  r.min_semitrans = num_from(need(j, "min_semitrans"));
  r.min_eps = num_from(need(j, "min_eps"));
  for (const auto& e : need(j, "records")) {
    SimplexRecord s;
    s.simplex = e.at("simplex").get<Simplex>();
    s.dim = e.at("dim").get<int>();
    s.semitrans_margin = num_from(e.at("semitrans_margin"));
    s.eps_margin = num_from(e.at("eps_margin"));
    s.degenerate = e.at("degenerate").get<bool>();
    s.transverse = e.at("transverse").get<bool>();
    s.stratified = e.at("stratified").get<bool>();
    s.general_position = e.at("general_position").get<bool>();
    s.certified = e.at("certified").get<bool>();
    r.records.push_back(std::move(s));
  }
  return r;
}

Json to_json(const JigglingConfig& c) {
  return {{"gamma", c.gamma},
          {"level", c.level < 0 ? Json("auto") : Json(c.level)},
          {"min_level", c.min_level},
          {"max_level", c.max_level},
          {"epsilon_vertex", c.epsilon_vertex},
          {"seed", c.seed},
          {"degeneracy_tol", c.degeneracy_tol},
          {"rank_tol", c.rank_tol},
          {"margin_floor", c.margin_floor},
          {"sample_depth", c.sample_depth},
          {"search_samples", c.search_samples},
          {"max_simplices", c.max_simplices}};
}

JigglingConfig config_from_json(const Json& j) {
  JigglingConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) parse_fail("config must be an object");
  try {
    if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
    if (j.contains("level")) {
      const Json& l = j.at("level");
      c.level = l.is_string() && l.get<std::string>() == "auto" ? -1 : l.get<int>();
    }
    if (j.contains("min_level")) c.min_level = j.at("min_level").get<int>();
    if (j.contains("max_level")) c.max_level = j.at("max_level").get<int>();
    if (j.contains("epsilon_vertex")) c.epsilon_vertex = j.at("epsilon_vertex").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("degeneracy_tol")) c.degeneracy_tol = j.at("degeneracy_tol").get<double>();
    if (j.contains("rank_tol")) c.rank_tol = j.at("rank_tol").get<double>();
    if (j.contains("margin_floor")) c.margin_floor = j.at("margin_floor").get<double>();
    if (j.contains("sample_depth")) c.sample_depth = j.at("sample_depth").get<int>();
    if (j.contains("search_samples")) c.search_samples = j.at("search_samples").get<int>();
    if (j.contains("max_simplices")) c.max_simplices = j.at("max_simplices").get<std::size_t>();
  } catch (const Json::exception& e) {
    parse_fail(std::string("config: ") + e.what());
  }
  if (!(c.margin_floor > 0.0)) throw Error(ErrorCode::ValidationError, "margin_floor must be > 0");
  if (!(c.epsilon_vertex > 0.0))
    throw Error(ErrorCode::ValidationError, "epsilon_vertex must be > 0");
  if (c.max_level < 0 || c.max_level > 12 || c.min_level < 0)
    throw Error(ErrorCode::ValidationError, "levels must lie in [0, 12]");
  if (c.sample_depth < 1 || c.search_samples < 1)
    throw Error(ErrorCode::ValidationError, "sample counts must be positive");
  return c;
}

Json to_json(const JigglingOutcome& o) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "jiggling_outcome"},
          {"level", o.level},
          {"config", to_json(o.config)},
          {"complex", to_json(o.k_out())},
          {"target_dim", o.g->target_dim()},
          {"images", points_json(o.g->images())},
          {"anchors", points_json(o.anchors)},
          {"subdivision", to_json(o.subdivision)},
          {"report", to_json(o.report)},
          {"distances", {{"c0", o.distances.c0}, {"c1", o.distances.c1}}},
          {"moved_vertices", o.moved_vertices},
          {"vertex_budget", o.vertex_budget}};
}

JigglingOutcome outcome_from_json(const Json& j) {
  JigglingOutcome o;
  const Json& cj = need(j, "complex");
  auto k = std::make_shared<const SimplicialComplex>(SimplicialComplex::trusted(
      need(cj, "ambient_dim").get<int>(), points_from(need(cj, "vertices")),
      simplices_from(need(cj, "simplices"))));
  o.g = std::make_shared<PLMap>(k, points_from(need(j, "images")));
  o.level = need(j, "level").get<int>();
  o.config = config_from_json(need(j, "config"));
  o.anchors = points_from(need(j, "anchors"));
  o.subdivision = subdivision_from_json(need(j, "subdivision"));
  o.report = report_from_json(need(j, "report"));
  o.distances.c0 = need(need(j, "distances"), "c0").get<double>();
  o.distances.c1 = need(need(j, "distances"), "c1").get<double>();
  o.moved_vertices = need(j, "moved_vertices").get<int>();
  o.vertex_budget = need(j, "vertex_budget").get<double>();
  return o;
}

Json to_json(const SubdivisionJiggle& s) {
  Json carriers = Json::array();
  for (const auto& c : s.carrier) carriers.push_back(c);
  return {{"schema_version", kSchemaVersion},
          {"kind", "subdivision_jiggle"},
          {"level", s.level},
          {"complex", to_json(s.t->domain())},
          {"images", points_json(s.t->images())},
          {"carriers", carriers},
          {"order", s.order},
          {"subdivision", to_json(s.to_k)},
          {"report", to_json(s.report)},
          {"moved_vertices", s.moved_vertices}};
}

bool is_builtin_complex(const std::string& name) {
  std::smatch m;
  return std::regex_match(name, m, builtin_pattern());
}

SimplicialComplex builtin_complex(const std::string& name) {
  std::smatch m;
  if (!std::regex_match(name, m, builtin_pattern()))
    throw Error(ErrorCode::ValidationError, "unknown builtin complex '" + name + "'");
  const std::string kind = m[1].str();
  std::vector<Point> verts;
  std::vector<Simplex> tops;
  if (kind == "unit_square_grid") {
    const int n = builtin_arg(m, 1, 64, kind);
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) verts.push_back(Point{{double(i) / n, double(j) / n}});
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        tops.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        tops.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      }
    return SimplicialComplex::build(2, verts, tops);
  }
  if (kind == "standard_simplex") {
    const int d = builtin_arg(m, 1, 6, kind);
    verts.push_back(Point::Zero(d));
    for (int i = 0; i < d; ++i) verts.push_back(Point::Unit(d, i));
    Simplex s(static_cast<size_t>(d + 1));
    for (int i = 0; i <= d; ++i) s[i] = i;
    return SimplicialComplex::build(d, verts, {s});
  }
  if (kind == "strip") {
    const int n = builtin_arg(m, 1, 256, kind);
    for (int i = 0; i <= n; ++i) verts.push_back(Point{{double(i), 0.0}});
    for (int i = 0; i <= n; ++i) verts.push_back(Point{{double(i), 1.0}});
    auto b = [](int i) { return i; };
    auto t = [n](int i) { return n + 1 + i; };
    for (int i = 0; i < n; ++i) {
      if (2 * i < n) {
        tops.push_back({b(i), b(i + 1), t(i)});
        tops.push_back({b(i + 1), t(i), t(i + 1)});
      } else {
        tops.push_back({b(i), b(i + 1), t(i + 1)});
        tops.push_back({b(i), t(i), t(i + 1)});
      }
    }
    return SimplicialComplex::build(2, verts, tops);
  }
  const int n = builtin_arg(m, 1, 16, kind);
  auto id = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.push_back(Point{{double(i) / n, double(j) / n, double(k) / n}});
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          Simplex s{id(c[0], c[1], c[2])};
          for (int axis : p) {
            ++c[axis];
            s.push_back(id(c[0], c[1], c[2]));
          }
          tops.push_back(std::move(s));
        }
  return SimplicialComplex::build(3, verts, tops);
}

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) parse_fail("scenario must be an object");
  Scenario sc;
  auto complex_ref = [&](const Json& c) {
    if (c.is_string()) return builtin_complex(c.get<std::string>());
    if (c.is_object() && c.contains("file"))
      return complex_from_json(read_json_file(base_dir / c.at("file").get<std::string>()));
    return complex_from_json(c);
  };
  if (j.contains("map")) {
    sc.map = plmap_from_json(j.at("map"));
    sc.complex = sc.map->domain_ptr();
  } else {
    sc.complex = std::make_shared<const SimplicialComplex>(complex_ref(need(j, "complex")));
    sc.map = std::make_shared<PLMap>(sc.complex, sc.complex->vertices());
  }
  if (j.contains("distribution"))
    sc.xi = distribution_from_json(j.at("distribution"), sc.map->target_dim());
  if (j.contains("config")) sc.config = config_from_json(j.at("config"));
  if (j.contains("relative")) {
    const Json& r = j.at("relative");
    if (r.contains("a")) sc.a = simplex_set_from(r.at("a"));
    if (r.contains("b")) sc.b = simplex_set_from(r.at("b"));
    if (r.contains("collar")) sc.collar = r.at("collar").get<double>();
  }
  if (j.contains("refined"))
    sc.refined = std::make_shared<const SimplicialComplex>(complex_ref(j.at("refined")));
  if (j.contains("tower_levels")) sc.tower_levels = j.at("tower_levels").get<std::vector<int>>();
  return sc;
}

}  // namespace jigglekit::io
