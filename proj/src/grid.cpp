#include "jetpot/grid.hpp"

#include <cmath>

namespace jetpot {

namespace {

// Iterate the integer lattice box [klo, khi] in n dimensions.
template <typename F>
void lattice(const std::vector<long>& klo, const std::vector<long>& khi, F&& visit) {
  const size_t n = klo.size();
  std::vector<long> k = klo;
  while (true) {
    visit(k);
    size_t i = 0;
    while (i < n) {
      if (++k[i] <= khi[i]) break;
      k[i] = klo[i];
      ++i;
    }
    if (i == n) break;
  }
}

}  // namespace

double GridDomain::enclosing_radius(const Vec& y) const {
  double r = 0.0;
  for (const auto& x : interior) r = std::max(r, (x - y).norm());
  for (const auto& x : boundary) r = std::max(r, (x - y).norm());
  return r;
}

GridDomain GridDomain::ball(Vec center, double radius, double h, double exclude_radius) {
  GridDomain g;
  g.shape = Shape::Ball;
  g.center = center;
  g.radius = radius;
  g.h = h;
  g.exclude_radius = exclude_radius;
  g.singular = Vec::Zero(center.size());
  const int n = static_cast<int>(center.size());
  std::vector<long> klo(n), khi(n);
  for (int i = 0; i < n; ++i) {
    klo[i] = static_cast<long>(std::floor((center(i) - radius) / h));
    khi[i] = static_cast<long>(std::ceil((center(i) + radius) / h));
  }
  lattice(klo, khi, [&](const std::vector<long>& k) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = h * static_cast<double>(k[i]);
    const double d = (x - center).norm();
    if (d > radius) return;
    if (exclude_radius > 0 && (x - g.singular).norm() < exclude_radius) {
      g.excluded.push_back(x);
      return;
    }
    if (d <= radius - h)
      g.interior.push_back(x);
    else
      g.boundary.push_back(x);
  });
  return g;
}

GridDomain GridDomain::box(Vec lo, Vec hi, double h, bool parabolic, double exclude_radius) {
  GridDomain g;
  g.shape = Shape::Box;
  g.lo = lo;
  g.hi = hi;
  g.h = h;
  g.parabolic = parabolic;
  g.exclude_radius = exclude_radius;
  const int n = static_cast<int>(lo.size());
  g.singular = Vec::Zero(n);
  g.t_top = hi(n - 1);
  std::vector<long> klo(n), khi(n);
  for (int i = 0; i < n; ++i) {
    klo[i] = static_cast<long>(std::floor(lo(i) / h));
    khi[i] = static_cast<long>(std::ceil(hi(i) / h));
  }
  lattice(klo, khi, [&](const std::vector<long>& k) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = h * static_cast<double>(k[i]);
    for (int i = 0; i < n; ++i)
      if (x(i) < lo(i) - 1e-12 || x(i) > hi(i) + 1e-12) return;
    if (exclude_radius > 0 && (x - g.singular).norm() < exclude_radius) {
      g.excluded.push_back(x);
      return;
    }
    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) dist = std::min({dist, x(i) - lo(i), hi(i) - x(i)});
    if (dist >= h - 1e-12) {
      g.interior.push_back(x);
      return;
    }
    // Boundary shell; under the parabolic rule the top time face (its
    // edge included) is not part of the boundary.
    if (parabolic && g.t_top - x(n - 1) < 0.5 * h) {
      g.top_face.push_back(x);
      return;
    }
    g.boundary.push_back(x);
  });
  return g;
}

}  // namespace jetpot
