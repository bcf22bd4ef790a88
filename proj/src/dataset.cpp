#include "orbit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "orbit/errors.hpp"
#include "orbit/rng.hpp"

namespace orbit {

std::string_view kind_name(DataKind k) { return k == DataKind::image ? "images" : "clouds"; }

std::size_t LabeledDataset::feature_dim() const {
  if (kind == DataKind::image) {
    return images.empty() ? 0 : images.front().height() * images.front().width();
  }
  return clouds.empty() ? 0 : 3 * clouds.front().size();
}

void LabeledDataset::validate() const {
  const std::size_t n = kind == DataKind::image ? images.size() : clouds.size();
  if (n != labels.size()) throw DataError("dataset: sample and label counts differ");
  if (n == 0) throw DataError("dataset: no samples");
  if (kind == DataKind::image && !clouds.empty()) throw DataError("dataset: image dataset holds clouds");
  if (kind == DataKind::cloud && !images.empty()) throw DataError("dataset: cloud dataset holds images");
  if (class_names.empty()) throw DataError("dataset: no class names");
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= class_names.size()) {
      throw DataError("dataset: label " + std::to_string(labels[i]) + " of sample " + std::to_string(i) +
                      " outside 0.." + std::to_string(class_names.size() - 1));
    }
    ++counts[static_cast<std::size_t>(labels[i])];
    if (kind == DataKind::image) {
      if (images[i].height() != images[0].height() || images[i].width() != images[0].width()) {
        throw DataError("dataset: image " + std::to_string(i) + " has different dimensions");
      }
    } else if (clouds[i].size() != clouds[0].size()) {
      throw DataError("dataset: cloud " + std::to_string(i) + " has a different point count");
    }
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw DataError("dataset: class " + class_names[c] + " has no samples");
  }
}

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kPlastic = 0.7548776662466927;

double frac(double v) { return v - std::floor(v); }

Vec3 surface_point(int cls, std::size_t k, std::size_t n) {
  const double t = (static_cast<double>(k) - 0.5) / static_cast<double>(n - 1);
  const double phi = 2.0 * std::numbers::pi * frac(static_cast<double>(k) * kGolden);
  switch (cls) {
    case 0: {  // sphere shell
      const double z = 1.0 - 2.0 * t;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      return {r * std::cos(phi), r * std::sin(phi), z};
    }
    case 1: {  // cube surface: radial projection of the sphere point
      const double z = 1.0 - 2.0 * t;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec3 d{r * std::cos(phi), r * std::sin(phi), z};
      const double m = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
      return {d[0] / m, d[1] / m, d[2] / m};
    }
    case 2:  // cylinder side
      return {std::cos(phi), std::sin(phi), 2.0 * t - 1.0};
    default: {  // planes y = 0 and x = 0 crossing along z
      const double a = 2.0 * frac(static_cast<double>(k) * kPlastic) - 1.0;
      const double b = 2.0 * t - 1.0;
      if (k % 2 == 0) return {a, 0.0, b};
      return {0.0, a, b};
    }
  }
}

// Smoothstep from 1 (inside) to 0 over `width` centered on the boundary.
double soft_inside(double signed_dist, double width) {
  const double t = std::clamp(0.5 - signed_dist / width, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

LabeledDataset gen_synthetic_clouds(std::uint64_t seed, std::size_t n_per_class, std::size_t n_points) {
  if (n_per_class == 0) throw std::invalid_argument("gen_synthetic_clouds: n_per_class must be >= 1");
  if (n_points < 4) throw std::invalid_argument("gen_synthetic_clouds: need at least 4 points");
  LabeledDataset ds;
  ds.kind = DataKind::cloud;
  ds.seed = seed;
  ds.class_names = {"sphere", "cube", "cylinder", "crossed_planes"};
  Rng rng(seed);
  constexpr Vec3 kStretch{1.6, 1.0, 0.6};
  constexpr Vec3 kLandmark{0.7, 0.5, 0.6};
  constexpr double kJitter = 0.02;
  for (std::size_t s = 0; s < n_per_class; ++s) {
    for (int cls = 0; cls < 4; ++cls) {
      Vec3 stretch;
      for (int a = 0; a < 3; ++a) stretch[a] = kStretch[a] * (1.0 + rng.uniform(-0.05, 0.05));
      PointCloud cloud;
      cloud.points.reserve(n_points);
      for (std::size_t k = 0; k < n_points; ++k) {
        const Vec3 base = k == 0 ? kLandmark : surface_point(cls, k, n_points);
        Vec3 p;
        for (int a = 0; a < 3; ++a) p[a] = base[a] * stretch[a] + kJitter * rng.normal();
        cloud.points.push_back(p);
      }
      ds.clouds.push_back(std::move(cloud));
      ds.labels.push_back(cls);
    }
  }
  return ds;
}

LabeledDataset gen_synthetic_images(std::uint64_t seed, std::size_t n_per_class, std::size_t size) {
  if (n_per_class == 0) throw std::invalid_argument("gen_synthetic_images: n_per_class must be >= 1");
  if (size < 16) throw std::invalid_argument("gen_synthetic_images: size must be >= 16");
  LabeledDataset ds;
  ds.kind = DataKind::image;
  ds.seed = seed;
  ds.class_names = {"disc", "bar", "wedge", "two_blob"};
  Rng rng(seed);
  // Shapes stay inside the annulus between the two gradient circles, so the
  // mean gradient on the circles is carried by the ramp and stays stable
  // under resampling.
  const double edge = 2.0 / static_cast<double>(size);
  constexpr double kMaxTilt = 15.0 * std::numbers::pi / 180.0;
  constexpr double kRamp = 0.4;
  constexpr double kShape = 0.5;
  for (std::size_t s = 0; s < n_per_class; ++s) {
    for (int cls = 0; cls < 4; ++cls) {
      const double tilt = rng.uniform(-kMaxTilt, kMaxTilt);
      const double du = rng.uniform(-0.015, 0.015);
      const double dv = rng.uniform(-0.015, 0.015);
      const double shape_jitter = rng.uniform(-1.0, 1.0);
      const double ct = std::cos(tilt);
      const double st = std::sin(tilt);
      Grid g(size, size);
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
          const double y = (static_cast<double>(i) + 0.5) / static_cast<double>(size) - 0.5;
          const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(size) - 0.5;
          // Template coordinates: u up, v right, content tilted by `tilt`.
          const double v = ct * x + st * y;
          const double u = -st * x + ct * y;
          double shape = 0.0;
          switch (cls) {
            case 0: {
              const double r = 0.07 + 0.01 * shape_jitter;
              shape = kShape * soft_inside(std::hypot(u - 0.225 - du, v - dv) - r, edge);
              break;
            }
            case 1: {
              const double half_len = 0.19 + 0.01 * shape_jitter;
              const double d = std::max(std::abs(v - dv) - half_len, std::abs(u - 0.22 - du) - 0.035);
              shape = kShape * soft_inside(d, edge);
              break;
            }
            case 2: {
              const double rho = std::hypot(u, v);
              const double half_angle = (35.0 + 4.0 * shape_jitter) * std::numbers::pi / 180.0;
              const double d = std::max({(std::abs(std::atan2(v - dv, u)) - half_angle) * rho, 0.15 - rho, rho - 0.29});
              shape = kShape * soft_inside(d, edge);
              break;
            }
            default: {
              const double ra = 0.06 + 0.008 * shape_jitter;
              const double a = kShape * soft_inside(std::hypot(u - 0.2 - du, v + 0.15 - dv) - ra, edge);
              const double b = 0.6 * kShape * soft_inside(std::hypot(u - 0.2 - du, v - 0.15 - dv) - 0.045, edge);
              shape = std::max(a, b);
              break;
            }
          }
          g.at(i, j) = kRamp * (u + 0.5) + shape + 0.003 * rng.normal();
        }
      }
      ds.images.emplace_back(std::move(g));
      ds.labels.push_back(cls);
    }
  }
  return ds;
}

}  // namespace orbit
