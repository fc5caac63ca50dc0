#include "jigglekit/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "jigglekit/error.hpp"

namespace jigglekit {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string render_svg(const SimplicialComplex& k, const std::vector<Point>& images,
                       const Distribution* xi, const std::vector<int>& failing,
                       const SvgOptions& opt) {
  const double w = opt.canvas;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.canvas << "\" height=\""
      << opt.canvas << "\" viewBox=\"0 0 " << opt.canvas << ' ' << opt.canvas << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << opt.canvas << "\" height=\"" << opt.canvas
      << "\" fill=\"white\"/>\n";
  if (images.empty()) {
    out << "</svg>\n";
    return out.str();
  }
  if (images.front().size() != 2 || (xi && xi->ambient_dim() != 2))
    throw Error(ErrorCode::UnsupportedDimension, "rendering needs images in R^2");

  Point lo = images.front(), hi = images.front();
  for (const auto& p : images) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-12});
  const double s = (w - 2.0 * opt.margin) / span;
  auto px = [&](const Point& p) {
    return fmt(opt.margin + (p(0) - lo(0)) * s) + "," + fmt(w - opt.margin - (p(1) - lo(1)) * s);
  };

  const std::set<int> bad(failing.begin(), failing.end());
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  for (int i = 0; i < static_cast<int>(k.top_simplices().size()); ++i) {
    const Simplex& t = k.top_simplices()[i];
    const char* fill = bad.count(i) ? "#f4a6a6" : "#e8e8e8";
    if (t.size() == 1) {
      out << "<circle cx=\"" << fmt(opt.margin + (images[t[0]](0) - lo(0)) * s) << "\" cy=\""
          << fmt(w - opt.margin - (images[t[0]](1) - lo(1)) * s) << "\" r=\"2\"/>\n";
      continue;
    }
    if (t.size() == 2) {
      out << "<polyline fill=\"none\" points=\"" << px(images[t[0]]) << ' ' << px(images[t[1]])
          << "\"" << (bad.count(i) ? " stroke=\"#d02020\"" : "") << "/>\n";
      continue;
    }
    out << "<polygon fill=\"" << fill << "\" points=\"";
    for (size_t j = 0; j < t.size(); ++j) out << (j ? " " : "") << px(images[t[j]]);
    out << "\"/>\n";
  }
  out << "</g>\n";

  if (xi && xi->rank() == 1 && opt.glyph_grid > 0) {
    const int g = opt.glyph_grid;
    const double half = 0.35 * span / g;
    out << "<g stroke=\"#2060c0\" stroke-width=\"1.5\">\n";
    for (int j = 0; j < g; ++j)
      for (int i = 0; i < g; ++i) {
        const Point c{{lo(0) + (i + 0.5) * span / g, lo(1) + (j + 0.5) * span / g}};
        Point d = xi->at(c).basis().col(0);
        if (d(0) < 0 || (d(0) == 0 && d(1) < 0)) d = -d;
        const Point a = c - half * d, b = c + half * d;
        out << "<line x1=\"" << fmt(opt.margin + (a(0) - lo(0)) * s) << "\" y1=\""
            << fmt(w - opt.margin - (a(1) - lo(1)) * s) << "\" x2=\""
            << fmt(opt.margin + (b(0) - lo(0)) * s) << "\" y2=\""
            << fmt(w - opt.margin - (b(1) - lo(1)) * s) << "\"/>\n";
      }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace jigglekit
