#pragma once

#include <string>
#include <vector>

#include "jigglekit/complex.hpp"
#include "jigglekit/distribution.hpp"

namespace jigglekit {

struct SvgOptions {
  int canvas = 800;
  int margin = 40;
  /// Glyphs per side of the distribution grid.
  int glyph_grid = 12;
};

/// Planar drawing of (K, images) with line-field glyphs and the maximal
/// simplices listed in `failing` highlighted.  Fixed canvas, 6 decimals.
/// Throws UnsupportedDimension unless the images lie in R^2.
std::string render_svg(const SimplicialComplex& k, const std::vector<Point>& images,
                       const Distribution* xi, const std::vector<int>& failing,
                       const SvgOptions& opt = {});

}  // namespace jigglekit
