#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's numerical kernels.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

inline Vec random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v / v.norm();
}

inline Vec random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// J e_j = e_{m+1+j}.
inline Vec j(const Vec& u) {
  const int h = static_cast<int>(u.size()) / 2;
  Vec out(u.size());
  out.head(h) = -u.tail(h);
  out.tail(h) = u.head(h);
  return out;
}

// Hamilton product on (a, b, c, d) = a + b i + c j + d k.
inline Eigen::Vector4d qmul(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

// x = (x1, x2, x3, x4) with z1 = x1 + i x3, z2 = x2 + i x4, q = z1 + z2 j.
inline Eigen::Vector4d to_quaternion(const Vec& x) {
  // z2 j = (x2 + i x4) j = x2 j + x4 k
  return {x[0], x[2], x[1], x[3]};
}

inline Vec from_quaternion(const Eigen::Vector4d& q) {
  Vec x(4);
  x << q[0], q[2], q[1], q[3];
  return x;
}

// Left multiplication by a unit imaginary quaternion.
inline Vec left_mul(int unit, const Vec& x) {
  Eigen::Vector4d u = Eigen::Vector4d::Zero();
  u[unit] = 1.0;
  return from_quaternion(qmul(u, to_quaternion(x)));
}

// Monte Carlo estimate of a round-sphere integral with its standard error.
inline std::pair<double, double> monte_carlo(const std::function<double(const Vec&)>& f, int n, std::size_t samples,
                                             std::uint64_t seed, double volume) {
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double v = f(random_unit(n, rng));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double var = sum2 / samples - mean * mean;
  return {mean * volume, std::sqrt(var / samples) * volume};
}

inline double sphere_volume(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return 2.0 * std::pow(pi, m + 1) / f;
}

inline double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
