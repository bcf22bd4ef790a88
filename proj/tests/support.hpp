#pragma once

// Test-side helpers that do not go through the library's own code paths.

#include <cmath>
#include <numbers>

#include "orbit/cloud.hpp"
#include "orbit/rng.hpp"

namespace testing_support {

/// Uniformly distributed proper rotation from a random unit quaternion.
inline orbit::Mat3 random_rotation(orbit::Rng& rng) {
  double q[4];
  double n = 0.0;
  do {
    n = 0.0;
    for (double& v : q) {
      v = rng.normal();
      n += v * v;
    }
  } while (n < 1e-12);
  n = std::sqrt(n);
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  return orbit::Mat3{{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
                      {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
                      {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

/// Anisotropic Gaussian blob, well separated eigenvalues.
inline orbit::PointCloud random_cloud(orbit::Rng& rng, int n = 50) {
  orbit::PointCloud c;
  for (int i = 0; i < n; ++i) c.points.push_back({3.0 * rng.normal(), 1.5 * rng.normal(), 0.5 * rng.normal()});
  return c;
}

/// Uniform point in the ball of the given radius.
inline orbit::Vec3 random_in_ball(orbit::Rng& rng, double radius) {
  for (;;) {
    const orbit::Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] <= 1.0) return {radius * v[0], radius * v[1], radius * v[2]};
  }
}

/// Angle difference wrapped to [-pi, pi).
inline double wrap_angle(double a) {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

inline double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace testing_support
