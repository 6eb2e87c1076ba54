#pragma once

#include <cstdint>
#include <random>

#include "jetpot/jets.hpp"

namespace jetpot {

// Seeded sampling used by all property checks. Entries are uniform[-1,1]
// scaled by a random magnitude 10^uniform[-1,1]; symmetric matrices are
// Q diag(w) Q^T with Q random orthogonal. Default seed 42.
class Sampler {
 public:
  explicit Sampler(uint64_t seed = 42) : gen_(seed), seed_(seed) {}

  uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return gen_; }

  double uniform(double a, double b) {
    return a + (b - a) * unit_(gen_);
  }
  int uniform_int(int a, int b) {
    std::uniform_int_distribution<int> d(a, b);
    return d(gen_);
  }
  double magnitude() { return std::pow(10.0, uniform(-1.0, 1.0)); }

  Vec vec(int n) {
    const double s = magnitude();
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = s * uniform(-1.0, 1.0);
    return v;
  }

  Vec unit(int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(n);
    double len = 0.0;
    do {
      for (int i = 0; i < n; ++i) v(i) = g(gen_);
      len = v.norm();
    } while (len < 1e-12);
    return v / len;
  }

  Mat orthogonal(int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = g(gen_);
    Eigen::HouseholderQR<Mat> qr(G);
    Mat Q = qr.householderQ();
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
      if (R(i, i) < 0) Q.col(i) *= -1.0;
    return Q;
  }

  Mat sym(int n) {
    const double s = magnitude();
    Vec w(n);
    for (int i = 0; i < n; ++i) w(i) = s * uniform(-1.0, 1.0);
    Mat Q = orthogonal(n);
    return Q * w.asDiagonal() * Q.transpose();
  }

  Mat sym_with_eigs(const Vec& w) {
    Mat Q = orthogonal(static_cast<int>(w.size()));
    return Q * w.asDiagonal() * Q.transpose();
  }

  Mat psd(int n) {
    const double s = magnitude();
    Vec w(n);
    for (int i = 0; i < n; ++i) w(i) = s * std::abs(uniform(-1.0, 1.0));
    return sym_with_eigs(w);
  }

  Jet jet(int n) {
    const double s = magnitude();
    return {s * uniform(-1.0, 1.0), vec(n), sym(n)};
  }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  uint64_t seed_;
};

}  // namespace jetpot
