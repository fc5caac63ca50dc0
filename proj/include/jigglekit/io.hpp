#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jigglekit/distribution.hpp"
#include "jigglekit/jiggling.hpp"

namespace jigglekit::io {

using Json = nlohmann::json;

constexpr int kSchemaVersion = 1;

/// Reads one JSON object; ParseError carries the byte offset on failure.
Json read_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text);
/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// {"ambient_dim", "vertices", "simplices"}; only maximal simplices are
/// written.
Json to_json(const SimplicialComplex& k);
/// Validating read.  Throws ParseError on malformed structure.
SimplicialComplex complex_from_json(const Json& j);

Json to_json(const SubdivisionMap& m);
SubdivisionMap subdivision_from_json(const Json& j);

/// {"complex", "target_dim", "images"}.
Json to_json(const PLMap& f);
std::shared_ptr<PLMap> plmap_from_json(const Json& j);

/// Constant, builtin and sampled fields; custom fields throw ValidationError.
Json to_json(const Distribution& xi);
Distribution distribution_from_json(const Json& j, int ambient_dim = 0);

Json to_json(const TransversalityReport& r);
TransversalityReport report_from_json(const Json& j);

Json to_json(const JigglingConfig& c);
/// Missing keys keep their defaults.  Throws ValidationError.
JigglingConfig config_from_json(const Json& j);

Json to_json(const JigglingOutcome& o);
JigglingOutcome outcome_from_json(const Json& j);

Json to_json(const SubdivisionJiggle& s);

/// unit_square_grid(n), standard_simplex(m), strip(n), box_grid(n).
/// strip(n): n unit squares in a row; the left half is cut along the
/// descending diagonal, the right half along the ascending one.  box_grid(n):
/// the unit cube cut into n^3 cubes of 6 tetrahedra each.
SimplicialComplex builtin_complex(const std::string& name);
bool is_builtin_complex(const std::string& name);

struct Scenario {
  std::shared_ptr<const SimplicialComplex> complex;
  std::shared_ptr<PLMap> map;  // identity when not given
  std::optional<Distribution> xi;
  JigglingConfig config;
  SimplexSet a;
  SimplexSet b;
  double collar = 0.0;
  std::shared_ptr<const SimplicialComplex> refined;  // subdivision mode; K when absent
  std::vector<int> tower_levels{2, 3, 4};
};

/// Complex given as a builtin name, an inline object or {"file": path}
/// relative to base_dir.
Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir = {});

}  // namespace jigglekit::io
