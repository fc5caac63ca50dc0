#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "jigglekit/grassmannian.hpp"

namespace jigglekit {

enum class DistributionKind { Constant, Builtin, Sampled, Custom };

/// A field of rank-k planes on R^n.
class Distribution {
 public:
  static Distribution constant(const Plane& v);
  /// Known names: "planar_rotor(w)" (line at angle w*x_1 in the x_1x_2-plane,
  /// any n >= 2, default n = 2), "vertical_twist" (R^3, rank 2,
  /// span(e_3, (cos x_3, sin x_3, 0))), "contact_like" (R^3, rank 2, the
  /// kernel of dz - y dx).  ambient_dim = 0 selects the default.
  static Distribution builtin(const std::string& name, int ambient_dim = 0);
  /// Nearest-neighbour interpolation of sampled planes.
  static Distribution sampled(std::vector<Point> points, std::vector<Plane> planes);
  /// Arbitrary field, not serializable.
  static Distribution custom(int ambient_dim, int rank, std::function<Plane(const Point&)> eval,
                             std::string name = "custom");

  Plane at(const Point& x) const;
  int ambient_dim() const { return n_; }
  int rank() const { return k_; }
  DistributionKind kind() const { return kind_; }
  bool is_constant() const { return kind_ == DistributionKind::Constant; }
  const std::string& name() const { return name_; }
  const std::vector<Point>& sample_points() const { return points_; }
  const std::vector<Plane>& sample_planes() const { return planes_; }

 private:
  int n_ = 0;
  int k_ = 0;
  DistributionKind kind_ = DistributionKind::Constant;
  std::string name_;
  std::function<Plane(const Point&)> eval_;
  std::vector<Point> points_;
  std::vector<Plane> planes_;
};

}  // namespace jigglekit
