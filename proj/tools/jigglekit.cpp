// jigglekit command-line tool.
//
// Exit codes: 0 success, 1 check failed, 2 parse error, 3 validation error,
// 4 perturbation failed, 5 budget or level cannot be met, 6 other error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jigglekit/error.hpp"
#include "jigglekit/io.hpp"
#include "jigglekit/svg.hpp"

namespace fs = std::filesystem;
using namespace jigglekit;
using io::Json;

namespace {

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
      return 2;
    case ErrorCode::ValidationError:
    case ErrorCode::FaceIntersectionViolation:
    case ErrorCode::DegenerateSimplex:
    case ErrorCode::QueryNotInComplex:
    case ErrorCode::RankDeficient:
    case ErrorCode::AmbientMismatch:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::NotOpposingFaces:
    case ErrorCode::DomainMismatch:
    case ErrorCode::NotTransverse:
    case ErrorCode::UnsupportedDimension:
      return 3;
    case ErrorCode::PerturbationFailed:
    case ErrorCode::EmbeddingLost:
    case ErrorCode::StarNotTransverse:
    case ErrorCode::InfeasibleDimensions:
    case ErrorCode::SkeletonViolation:
    case ErrorCode::VolumeMismatch:
      return 4;
    case ErrorCode::BudgetViolation:
    case ErrorCode::LevelExhausted:
    case ErrorCode::CollarTooSmall:
      return 5;
    default:
      return 6;
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path);
  out << text;
}

// A map from a complex file, a map file or an outcome bundle; identity on
// bare complexes.
std::shared_ptr<PLMap> load_map(const Json& j) {
  if (j.contains("images") && j.contains("complex")) {
    const Json& cj = j.at("complex");
    return io::plmap_from_json({{"complex", cj},
                                {"target_dim", j.value("target_dim", cj.value("ambient_dim", 0))},
                                {"images", j.at("images")}});
  }
  if (j.contains("map")) return io::plmap_from_json(j.at("map"));
  const Json& cj = j.contains("complex") ? j.at("complex") : j;
  if (cj.is_string()) {
    auto k = std::make_shared<const SimplicialComplex>(io::builtin_complex(cj.get<std::string>()));
    return std::make_shared<PLMap>(k, k->vertices());
  }
  auto k = std::make_shared<const SimplicialComplex>(io::complex_from_json(cj));
  return std::make_shared<PLMap>(k, k->vertices());
}

Json load_input(const std::string& arg) {
  if (!fs::exists(arg) && io::is_builtin_complex(arg)) return Json(arg);
  return io::read_json_file(arg);
}

std::optional<Distribution> load_distribution(const std::string& file, const Json& input,
                                              int ambient_dim) {
  if (!file.empty()) return io::distribution_from_json(io::read_json_file(file), ambient_dim);
  if (input.is_object() && input.contains("distribution"))
    return io::distribution_from_json(input.at("distribution"), ambient_dim);
  return std::nullopt;
}

Notion notion_from(const std::string& s) {
  if (s == "transverse") return Notion::Transverse;
  if (s == "stratified") return Notion::Stratified;
  if (s == "general-position") return Notion::GeneralPosition;
  return Notion::Report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subdivide, jiggle, verify and render triangulations against plane fields"};
  app.require_subcommand(1);

  std::string input, output, scheme = "crystalline", mode = "euclidean", dist_file, notion = "report",
                             svg_out;
  int levels = 1;
  std::optional<double> gamma;
  std::optional<std::uint64_t> seed;
  std::optional<int> level;

  auto* sub = app.add_subcommand("subdivide", "Subdivide a complex");
  sub->add_option("input", input, "Complex JSON or builtin name")->required();
  sub->add_option("--levels", levels, "Crystalline levels")->check(CLI::Range(0, 12));
  sub->add_option("--scheme", scheme)->check(CLI::IsMember({"crystalline", "barycentric"}));
  sub->add_option("-o,--output", output, "Output file (stdout when omitted)");

  auto* jig = app.add_subcommand("jiggle", "Jiggle a scenario");
  jig->add_option("input", input, "Scenario JSON")->required();
  jig->add_option("--mode", mode)
      ->check(CLI::IsMember({"euclidean", "tower", "relative", "subdivision"}));
  jig->add_option("--gamma", gamma, "C1 budget");
  jig->add_option("--seed", seed, "Random seed");
  jig->add_option("--level", level, "Subdivision level (auto when omitted)");
  jig->add_option("-o,--output", output, "Outcome bundle (stdout when omitted)");

  auto* ver = app.add_subcommand("verify", "Check a map against a distribution");
  ver->add_option("input", input, "Map, complex or outcome JSON")->required();
  ver->add_option("--distribution", dist_file, "Distribution JSON");
  ver->add_option("--notion", notion)
      ->check(CLI::IsMember({"transverse", "stratified", "general-position", "report"}));
  ver->add_option("-o,--output", output, "Report file (stdout when omitted)");

  auto* ren = app.add_subcommand("render", "Draw a planar map as SVG");
  ren->add_option("input", input, "Map, complex or outcome JSON")->required();
  ren->add_option("--distribution", dist_file, "Distribution JSON");
  ren->add_option("--svg", svg_out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sub) {
      const Json j = load_input(input);
      const auto f = load_map(j);
      const auto s = scheme == "barycentric" ? barycentric_subdivide(f->domain())
                                             : crystalline_subdivide(f->domain(), levels);
      Json out = {{"schema_version", io::kSchemaVersion},
                  {"complex", io::to_json(s.complex)},
                  {"subdivision", io::to_json(s.map)}};
      emit(output, io::dump(out));
      return 0;
    }

    if (*jig) {
      const Json j = io::read_json_file(input);
      auto sc = io::scenario_from_json(j, fs::path(input).parent_path());
      if (!sc.xi) throw Error(ErrorCode::ValidationError, "scenario has no distribution");
      if (const char* env = std::getenv("JIGGLEKIT_SEED")) {
        try {
          sc.config.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw Error(ErrorCode::ValidationError, "JIGGLEKIT_SEED must be an unsigned integer");
        }
      }
      if (seed) sc.config.seed = *seed;
      if (gamma) sc.config.gamma = *gamma;
      if (level) sc.config.level = *level;
      Json out;
      bool pass = false;
      if (mode == "euclidean" || mode == "relative") {
        const auto o = mode == "euclidean"
                           ? jiggle_euclidean(*sc.map, *sc.xi, sc.config)
                           : jiggle_relative(*sc.map, *sc.xi, sc.config, sc.a, sc.b, sc.collar);
        out = io::to_json(o);
        pass = o.report.pass;
        std::cerr << (pass ? "pass" : "fail") << " level=" << o.level
                  << " moved=" << o.moved_vertices << " c0=" << o.distances.c0
                  << " c1=" << o.distances.c1 << "\n";
      } else if (mode == "tower") {
        const auto os = jiggle_tower(*sc.map, *sc.xi, sc.config, sc.tower_levels);
        out = {{"schema_version", io::kSchemaVersion}, {"kind", "jiggling_tower"}};
        out["outcomes"] = Json::array();
        pass = true;
        for (const auto& o : os) {
          out["outcomes"].push_back(io::to_json(o));
          pass = pass && o.report.pass;
        }
      } else {
        const auto& refined = sc.refined ? *sc.refined : *sc.complex;
        const auto s = jiggle_subdivision(*sc.map, refined, *sc.xi, sc.config);
        out = io::to_json(s);
        pass = s.report.pass;
      }
      emit(output, io::dump(out));
      return pass ? 0 : 1;
    }

    if (*ver) {
      const Json j = load_input(input);
      const auto f = load_map(j);
      const auto xi = load_distribution(dist_file, j, f->target_dim());
      if (!xi) throw Error(ErrorCode::ValidationError, "no distribution given");
      ReportOptions opt;
      opt.notion = notion_from(notion);
      const auto r = build_report(f->domain(), f->images(), *xi, opt);
      emit(output, io::dump(io::to_json(r)));
      return r.pass ? 0 : 1;
    }

    if (*ren) {
      const Json j = load_input(input);
      const auto f = load_map(j);
      const auto xi = load_distribution(dist_file, j, f->target_dim());
      std::vector<int> failing;
      if (xi && f->domain().num_vertices() > 0) {
        ReportOptions opt;
        opt.notion = Notion::GeneralPosition;
        const auto r = build_report(f->domain(), f->images(), *xi, opt);
        for (const auto& rec : r.records)
          if (!rec.general_position) failing.push_back(f->domain().top_index(rec.simplex));
      }
      emit(svg_out, render_svg(f->domain(), f->images(), xi ? &*xi : nullptr, failing));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "jigglekit: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "jigglekit: " << e.what() << "\n";
    return 6;
  }
  return 6;
}
