#pragma once

#include <vector>

#include "jetpot/jets.hpp"

namespace jetpot {

// Lattice discretization of a ball or box, with interior / boundary-shell
// classification and an explicit list of excluded singular points.
struct GridDomain {
  enum class Shape { Ball, Box };

  Shape shape{Shape::Ball};
  Vec center;
  double radius{0};
  Vec lo, hi;
  double h{0};
  double exclude_radius{0};  // drop |x - singular| < exclude_radius
  Vec singular;              // the excluded point (defaults to the origin)

  std::vector<Vec> interior;
  std::vector<Vec> boundary;  // shell within h of the topological boundary
  std::vector<Vec> excluded;

  bool parabolic{false};  // last coordinate is time; top face not boundary
  double t_top{0};
  std::vector<Vec> top_face;  // boundary points dropped by the parabolic rule

  // Enclosing radius about a point (max |x - y| over interior points).
  double enclosing_radius(const Vec& y) const;

  static GridDomain ball(Vec center, double radius, double h, double exclude_radius = 0.0);
  static GridDomain box(Vec lo, Vec hi, double h, bool parabolic = false,
                        double exclude_radius = 0.0);
};

}  // namespace jetpot
