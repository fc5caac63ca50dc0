#include "jigglekit/distribution.hpp"

#include <cmath>
#include <limits>
#include <regex>

#include "jigglekit/error.hpp"

namespace jigglekit {

Distribution Distribution::constant(const Plane& v) {
  Distribution d;
  d.n_ = v.ambient_dim();
  d.k_ = v.rank();
  d.kind_ = DistributionKind::Constant;
  d.name_ = "constant";
  d.eval_ = [v](const Point&) { return v; };
  d.planes_ = {v};
  return d;
}

Distribution Distribution::builtin(const std::string& name, int ambient_dim) {
  Distribution d;
  d.kind_ = DistributionKind::Builtin;
  d.name_ = name;
  static const std::regex rotor(R"(\s*planar_rotor\(\s*([-+0-9.eE]+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(name, m, rotor)) {
    const double w = std::stod(m[1].str());
    const int n = ambient_dim == 0 ? 2 : ambient_dim;
    if (n < 2) throw Error(ErrorCode::ValidationError, "planar_rotor needs ambient_dim >= 2");
    d.n_ = n;
    d.k_ = 1;
    d.eval_ = [w, n](const Point& x) {
      Matrix b = Matrix::Zero(n, 1);
      b(0, 0) = std::cos(w * x(0));
      b(1, 0) = std::sin(w * x(0));
      return Plane(n, b);
    };
    return d;
  }
  if (ambient_dim != 0 && ambient_dim != 3)
    throw Error(ErrorCode::ValidationError, name + " is defined on R^3 only");
  d.n_ = 3;
  d.k_ = 2;
  if (name == "vertical_twist") {
    d.eval_ = [](const Point& x) {
      Matrix b(3, 2);
      b << 0.0, std::cos(x(2)), 0.0, std::sin(x(2)), 1.0, 0.0;
      return Plane(3, b);
    };
    return d;
  }
  if (name == "contact_like") {
    d.eval_ = [](const Point& x) {
      Matrix b(3, 2);
      b << 0.0, 1.0, 1.0, 0.0, 0.0, x(1);
      return plane_from_matrix(b);
    };
    return d;
  }
  throw Error(ErrorCode::ValidationError, "unknown builtin distribution '" + name + "'");
}

Distribution Distribution::sampled(std::vector<Point> points, std::vector<Plane> planes) {
  if (points.empty() || points.size() != planes.size())
    throw Error(ErrorCode::ValidationError, "sampled distribution needs matching points/planes");
  Distribution d;
  d.kind_ = DistributionKind::Sampled;
  d.name_ = "samples";
  d.n_ = planes.front().ambient_dim();
  d.k_ = planes.front().rank();
  for (size_t i = 0; i < planes.size(); ++i)
    if (planes[i].ambient_dim() != d.n_ || planes[i].rank() != d.k_ ||
        points[i].size() != d.n_)
      throw Error(ErrorCode::ValidationError, "sampled planes must share ambient dim and rank");
  d.points_ = std::move(points);
  d.planes_ = std::move(planes);
  return d;
}

Distribution Distribution::custom(int ambient_dim, int rank,
                                  std::function<Plane(const Point&)> eval, std::string name) {
  Distribution d;
  d.kind_ = DistributionKind::Custom;
  d.name_ = std::move(name);
  d.n_ = ambient_dim;
  d.k_ = rank;
  d.eval_ = std::move(eval);
  return d;
}

Plane Distribution::at(const Point& x) const {
  if (x.size() != n_) throw Error(ErrorCode::AmbientMismatch, "point dimension differs");
  if (kind_ == DistributionKind::Sampled) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < points_.size(); ++i) {
      const double dist = (points_[i] - x).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = i;
      }
    }
    return planes_[best];
  }
  return eval_(x);
}

}  // namespace jigglekit
