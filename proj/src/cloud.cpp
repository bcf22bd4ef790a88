#include "orbit/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "orbit/errors.hpp"

namespace orbit {

Mat3 identity3() { return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    }
  }
  return c;
}

Mat3 transpose(const Mat3& a) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  }
  return t;
}

double determinant(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 rotation_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

Mat3 rotation_x(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{{1.0, 0.0, 0.0}, {0.0, c, -s}, {0.0, s, c}}};
}

PointCloud transform_rows(const PointCloud& x, const Mat3& m) {
  PointCloud y;
  y.points.reserve(x.size());
  for (const auto& p : x.points) {
    y.points.push_back({p[0] * m[0][0] + p[1] * m[1][0] + p[2] * m[2][0],
                        p[0] * m[0][1] + p[1] * m[1][1] + p[2] * m[2][1],
                        p[0] * m[0][2] + p[1] * m[1][2] + p[2] * m[2][2]});
  }
  return y;
}

PointCloud rotate_points(const PointCloud& x, const Mat3& r) { return transform_rows(x, transpose(r)); }

PointCloud scale_points(const PointCloud& x, double c) {
  PointCloud y = x;
  for (auto& p : y.points) {
    for (double& v : p) v *= c;
  }
  return y;
}

PointCloud translate_points(const PointCloud& x, const Vec3& t) {
  PointCloud y = x;
  for (auto& p : y.points) {
    for (int k = 0; k < 3; ++k) p[k] += t[k];
  }
  return y;
}

Vec3 centroid(const PointCloud& x) {
  if (x.points.empty()) throw std::invalid_argument("centroid: empty cloud");
  Vec3 c{0.0, 0.0, 0.0};
  for (const auto& p : x.points) {
    for (int k = 0; k < 3; ++k) c[k] += p[k];
  }
  for (double& v : c) v /= static_cast<double>(x.size());
  return c;
}

double mean_norm(const PointCloud& x) {
  if (x.points.empty()) throw std::invalid_argument("mean_norm: empty cloud");
  double s = 0.0;
  for (const auto& p : x.points) s += std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return s / static_cast<double>(x.size());
}

Centered center_cloud(const PointCloud& x) {
  const Vec3 c = centroid(x);
  PointCloud y = x;
  for (auto& p : y.points) {
    for (int k = 0; k < 3; ++k) p[k] -= c[k];
  }
  return {std::move(y), c};
}

Normalized normalize_scale(const PointCloud& x) {
  const double s = mean_norm(x);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DegenerateInput("normalize_scale: all points at the origin, scale is zero");
  }
  PointCloud y = x;
  for (auto& p : y.points) {
    for (double& v : p) v /= s;
  }
  return {std::move(y), s};
}

Eigen3 eig3_sym(const Mat3& c) {
  double norm2 = 0.0;
  for (const auto& row : c) {
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("eig3_sym: non-finite entry");
      norm2 += v * v;
    }
  }
  const double norm = std::sqrt(norm2);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(c[i][j] - c[j][i]) > 1e-10 * norm) {
        throw std::invalid_argument("eig3_sym: matrix is not symmetric");
      }
    }
  }

  Mat3 a = c;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) a[i][j] = a[j][i] = 0.5 * (c[i][j] + c[j][i]);
  }
  Mat3 v = identity3();
  constexpr int kMaxSweeps = 64;
  constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
  auto off_norm = [&a] {
    return std::sqrt(2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]));
  };

  int sweeps = 0;
  while (sweeps < kMaxSweeps && off_norm() > 1e-12 * norm) {
    ++sweeps;
    for (const auto& [p, q] : kPairs) {
      const double apq = a[p][q];
      if (apq == 0.0) continue;
      const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double cs = 1.0 / std::sqrt(t * t + 1.0);
      const double sn = t * cs;

      // a <- J^T a J with J the (p, q) plane rotation.
      const double app = a[p][p];
      const double aqq = a[q][q];
      a[p][p] = app - t * apq;
      a[q][q] = aqq + t * apq;
      a[p][q] = a[q][p] = 0.0;
      const int r = 3 - p - q;
      const double arp = a[r][p];
      const double arq = a[r][q];
      a[r][p] = a[p][r] = cs * arp - sn * arq;
      a[r][q] = a[q][r] = sn * arp + cs * arq;

      for (int k = 0; k < 3; ++k) {
        const double vkp = v[k][p];
        const double vkq = v[k][q];
        v[k][p] = cs * vkp - sn * vkq;
        v[k][q] = sn * vkp + cs * vkq;
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&a](int x, int y) { return a[x][x] > a[y][y]; });
  Eigen3 out;
  out.sweeps = sweeps;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a[order[k]][order[k]];
    for (int row = 0; row < 3; ++row) out.vectors[row][k] = v[row][order[k]];
  }
  return out;
}

Mat3 PCAFrame::rotation() const {
  Mat3 r = basis;
  for (auto& row : r) {
    for (int k = 0; k < 3; ++k) row[k] *= signs[k];
  }
  return r;
}

PointCloud apply_frame(const PCAFrame& f, const PointCloud& x) {
  PointCloud y = x;
  for (auto& p : y.points) {
    for (int k = 0; k < 3; ++k) p[k] = (p[k] - f.centroid[k]) / f.scale;
  }
  return transform_rows(y, f.rotation());
}

PointCloud unapply_frame(const PCAFrame& f, const PointCloud& y) {
  PointCloud x = transform_rows(y, transpose(f.rotation()));
  for (auto& p : x.points) {
    for (int k = 0; k < 3; ++k) p[k] = p[k] * f.scale + f.centroid[k];
  }
  return x;
}

CloudCanon canonicalize_rotation(const PointCloud& x) {
  if (x.size() < 3) {
    throw std::invalid_argument("canonicalize_rotation: need at least 3 points, got " +
                                std::to_string(x.size()));
  }
  const double m = mean_norm(x);
  const Vec3 c = centroid(x);
  if (std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]) > 1e-9 * m) {
    throw std::invalid_argument("canonicalize_rotation: cloud is not centered");
  }

  Mat3 cov{};
  for (const auto& p : x.points) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) cov[i][j] += p[i] * p[j];
    }
  }
  const Eigen3 eig = eig3_sym(cov);

  PCAFrame frame;
  frame.centroid = {0.0, 0.0, 0.0};
  frame.scale = 1.0;
  frame.basis = eig.vectors;
  const Vec3& lam = eig.values;
  for (int k = 0; k < 3; ++k) frame.singular_values[k] = std::sqrt(std::max(lam[k], 0.0));
  if (!(lam[0] > 0.0) || lam[0] - lam[1] < kEigenTieThreshold * lam[0] ||
      lam[1] - lam[2] < kEigenTieThreshold * lam[0]) {
    frame.degenerate = true;
  }

  // Signs from the projection X V: its first row is the first row of U
  // scaled by the (positive) singular values.
  const PointCloud proj = transform_rows(x, frame.basis);
  const double threshold = kSignThreshold * m;
  for (int k = 0; k < 3; ++k) {
    const double lead = proj.points[0][k];
    if (std::abs(lead) > threshold) {
      frame.signs[k] = lead > 0.0 ? 1.0 : -1.0;
      continue;
    }
    frame.degenerate = true;
    frame.signs[k] = 1.0;
    for (const auto& p : proj.points) {
      if (std::abs(p[k]) > threshold) {
        frame.signs[k] = p[k] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
  }
  if (determinant(frame.rotation()) < 0.0) frame.signs[2] = -frame.signs[2];

  return {transform_rows(x, frame.rotation()), frame};
}

CloudCanon canonicalize_similarity(const PointCloud& x) {
  if (x.size() < 3) {
    throw std::invalid_argument("canonicalize_similarity: need at least 3 points, got " +
                                std::to_string(x.size()));
  }
  auto centered = center_cloud(x);
  auto normalized = normalize_scale(centered.cloud);
  CloudCanon out = canonicalize_rotation(normalized.cloud);
  out.frame.centroid = centered.centroid;
  out.frame.scale = normalized.scale;
  return out;
}

OrbitMapping<PointCloud, PCAFrame> cloud_orbit_mapping() {
  return {[](const PointCloud& x) {
            CloudCanon c = canonicalize_similarity(x);
            const Vec3 s = c.frame.singular_values;
            const double l0 = s[0] * s[0];
            const double gap = l0 > 0.0 ? std::min(l0 - s[1] * s[1], s[1] * s[1] - s[2] * s[2]) / l0 : 0.0;
            return CanonResult<PointCloud, PCAFrame>{std::move(c.cloud), c.frame, c.frame.degenerate, gap};
          },
          [](const PCAFrame& f, const PointCloud& y) { return unapply_frame(f, y); }};
}

double max_abs_diff(const PointCloud& a, const PointCloud& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(a.points[i][k] - b.points[i][k]));
  }
  return d;
}

}  // namespace orbit
