#include "orbit/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace orbit {

GrayImage::GrayImage(std::size_t height, std::size_t width, double fill)
    : GrayImage(Grid(height, width, fill)) {}

GrayImage::GrayImage(Grid pixels) : pixels_(std::move(pixels)) {
  for (double& v : pixels_.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("GrayImage: non-finite pixel value");
    v = std::clamp(v, 0.0, 1.0);
  }
}

void GrayImage::set(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("GrayImage: non-finite pixel value");
  pixels_.at(i, j) = std::clamp(v, 0.0, 1.0);
}

std::string_view scheme_name(InterpolationScheme s) {
  switch (s) {
    case InterpolationScheme::nearest: return "nearest";
    case InterpolationScheme::bilinear: return "bilinear";
    case InterpolationScheme::bicubic: return "bicubic";
  }
  return "unknown";
}

InterpolationScheme parse_scheme(std::string_view name) {
  if (name == "nearest") return InterpolationScheme::nearest;
  if (name == "bilinear") return InterpolationScheme::bilinear;
  if (name == "bicubic") return InterpolationScheme::bicubic;
  throw std::invalid_argument("unknown interpolation scheme '" + std::string(name) + "'");
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    const double w = std::exp(-static_cast<double>(t * t) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(t + radius)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

std::size_t clamp_index(long i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

double cubic_weight(double t) {
  constexpr double a = kBicubicA;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

// Lower cell index and offset for bilinear interpolation along one axis of
// length n, with the coordinate already clamped into [0, n - 1].
struct Cell {
  std::size_t lo;
  double t;
};

Cell bilinear_cell(double x, std::size_t n) {
  if (n == 1) return {0, 0.0};
  auto lo = static_cast<std::size_t>(std::floor(x));
  if (lo >= n - 1) lo = n - 2;
  return {lo, x - static_cast<double>(lo)};
}

double bilinear_at(const Grid& img, double row, double col) {
  row = std::clamp(row, 0.0, static_cast<double>(img.rows - 1));
  col = std::clamp(col, 0.0, static_cast<double>(img.cols - 1));
  const Cell r = bilinear_cell(row, img.rows);
  const Cell c = bilinear_cell(col, img.cols);
  const std::size_t r1 = std::min(r.lo + 1, img.rows - 1);
  const std::size_t c1 = std::min(c.lo + 1, img.cols - 1);
  const double bottom = (1.0 - c.t) * img.at(r.lo, c.lo) + c.t * img.at(r.lo, c1);
  const double top = (1.0 - c.t) * img.at(r1, c.lo) + c.t * img.at(r1, c1);
  return (1.0 - r.t) * bottom + r.t * top;
}

}  // namespace

Grid gaussian_blur(const Grid& img, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian_blur: sigma must be positive, got " + std::to_string(sigma));
  }
  const auto kernel = gaussian_kernel(sigma);
  const long radius = static_cast<long>(kernel.size() / 2);
  Grid tmp(img.rows, img.cols);
  for (std::size_t i = 0; i < img.rows; ++i) {
    for (std::size_t j = 0; j < img.cols; ++j) {
      double acc = 0.0;
      for (long t = -radius; t <= radius; ++t) {
        acc += kernel[static_cast<std::size_t>(t + radius)] *
               img.at(i, clamp_index(static_cast<long>(j) + t, img.cols));
      }
      tmp.at(i, j) = acc;
    }
  }
  Grid out(img.rows, img.cols);
  for (std::size_t i = 0; i < img.rows; ++i) {
    for (std::size_t j = 0; j < img.cols; ++j) {
      double acc = 0.0;
      for (long t = -radius; t <= radius; ++t) {
        acc += kernel[static_cast<std::size_t>(t + radius)] *
               tmp.at(clamp_index(static_cast<long>(i) + t, img.rows), j);
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  return GrayImage(gaussian_blur(img.grid(), sigma));
}

SmoothImageModel::SmoothImageModel(const GrayImage& img, double sigma)
    : raster_(gaussian_blur(img.grid(), sigma)) {}

SmoothImageModel::SmoothImageModel(Grid raster) : raster_(std::move(raster)) {
  if (raster_.rows == 0 || raster_.cols == 0) {
    throw std::invalid_argument("SmoothImageModel: empty raster");
  }
}

double SmoothImageModel::value(double z1, double z2) const {
  return bilinear_at(raster_, z1 * static_cast<double>(raster_.rows) - 0.5,
                     z2 * static_cast<double>(raster_.cols) - 0.5);
}

std::array<double, 2> SmoothImageModel::gradient(double z1, double z2) const {
  const std::size_t h = raster_.rows;
  const std::size_t w = raster_.cols;
  double row = z1 * static_cast<double>(h) - 0.5;
  double col = z2 * static_cast<double>(w) - 0.5;
  const bool row_free = h > 1 && row >= 0.0 && row <= static_cast<double>(h - 1);
  const bool col_free = w > 1 && col >= 0.0 && col <= static_cast<double>(w - 1);
  row = std::clamp(row, 0.0, static_cast<double>(h - 1));
  col = std::clamp(col, 0.0, static_cast<double>(w - 1));
  const Cell r = bilinear_cell(row, h);
  const Cell c = bilinear_cell(col, w);
  const std::size_t r1 = std::min(r.lo + 1, h - 1);
  const std::size_t c1 = std::min(c.lo + 1, w - 1);
  const double v00 = raster_.at(r.lo, c.lo);
  const double v01 = raster_.at(r.lo, c1);
  const double v10 = raster_.at(r1, c.lo);
  const double v11 = raster_.at(r1, c1);
  double d_row = 0.0;
  double d_col = 0.0;
  if (row_free) d_row = (1.0 - c.t) * (v10 - v00) + c.t * (v11 - v01);
  if (col_free) d_col = (1.0 - r.t) * (v01 - v00) + r.t * (v11 - v10);
  return {d_row * static_cast<double>(h), d_col * static_cast<double>(w)};
}

MeanGradient mean_gradient(const SmoothImageModel& model) {
  MeanGradient mg;
  for (double radius : {kInnerRadius, kOuterRadius}) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < kCircleSamples; ++k) {
      const double t = 2.0 * std::numbers::pi * k / kCircleSamples;
      const auto g = model.gradient(0.5 + radius * std::cos(t), 0.5 + radius * std::sin(t));
      s1 += g[0];
      s2 += g[1];
    }
    mg.g1 += 0.5 * s1 / kCircleSamples;
    mg.g2 += 0.5 * s2 / kCircleSamples;
    mg.sample_count += kCircleSamples;
  }
  mg.magnitude = std::hypot(mg.g1, mg.g2);
  return mg;
}

CanonicalAngle canonical_angle(const MeanGradient& mg, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("canonical_angle: negative threshold");
  if (!(mg.magnitude > threshold)) return {0.0, true};
  double a = std::atan2(mg.g2, mg.g1);
  if (a <= -std::numbers::pi) a = std::numbers::pi;
  return {a, false};
}

double sample_pixel(const Grid& img, double row, double col, InterpolationScheme scheme) {
  switch (scheme) {
    case InterpolationScheme::nearest:
      return img.at(clamp_index(static_cast<long>(std::floor(row + 0.5)), img.rows),
                    clamp_index(static_cast<long>(std::floor(col + 0.5)), img.cols));
    case InterpolationScheme::bilinear:
      return bilinear_at(img, row, col);
    case InterpolationScheme::bicubic: {
      const double fr = std::floor(row);
      const double fc = std::floor(col);
      const double tr = row - fr;
      const double tc = col - fc;
      const auto ir = static_cast<long>(fr);
      const auto ic = static_cast<long>(fc);
      double acc = 0.0;
      for (long a = -1; a <= 2; ++a) {
        const double wr = cubic_weight(tr - static_cast<double>(a));
        double line = 0.0;
        for (long b = -1; b <= 2; ++b) {
          line += cubic_weight(tc - static_cast<double>(b)) *
                  img.at(clamp_index(ir + a, img.rows), clamp_index(ic + b, img.cols));
        }
        acc += wr * line;
      }
      return acc;
    }
  }
  return 0.0;
}

GrayImage rotate_image(const GrayImage& img, double angle, InterpolationScheme scheme) {
  if (!img.square()) throw std::invalid_argument("rotate_image: image must be square");
  if (!std::isfinite(angle)) throw std::invalid_argument("rotate_image: non-finite angle");
  double c = std::cos(angle);
  double s = std::sin(angle);
  // Snap so that multiples of a quarter turn are exact permutations.
  constexpr double snap = 1e-15;
  if (std::abs(c) < snap) {
    c = 0.0;
    s = s > 0.0 ? 1.0 : -1.0;
  } else if (std::abs(s) < snap) {
    s = 0.0;
    c = c > 0.0 ? 1.0 : -1.0;
  }
  const std::size_t n = img.height();
  const double half = static_cast<double>(n) / 2.0;
  const Grid& src = img.grid();
  Grid out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = static_cast<double>(i) + 0.5 - half;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = static_cast<double>(j) + 0.5 - half;
      // Source position = R(-angle) applied to the offset from the center.
      const double x = c * dx + s * dy;
      const double y = -s * dx + c * dy;
      if (x < -half || x > half || y < -half || y > half) continue;
      out.at(i, j) = sample_pixel(src, half + y - 0.5, half + x - 0.5, scheme);
    }
  }
  return GrayImage(std::move(out));
}

CanonicalAngle estimate_angle(const GrayImage& img, double sigma, double threshold) {
  if (!img.square()) {
    throw std::invalid_argument("canonicalization requires a square image, got " +
                                std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  const SmoothImageModel model(img, sigma);
  return canonical_angle(mean_gradient(model), threshold);
}

ImageCanon canonicalize_image(const GrayImage& img, InterpolationScheme scheme, double sigma,
                              double threshold) {
  if (!img.square()) {
    throw std::invalid_argument("canonicalization requires a square image, got " +
                                std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  const SmoothImageModel model(img, sigma);
  const MeanGradient mg = mean_gradient(model);
  const CanonicalAngle ca = canonical_angle(mg, threshold);
  ImageCanon result;
  result.element = ca.angle;
  result.degenerate = ca.degenerate;
  result.energy = mg.magnitude;
  result.canonical = ca.degenerate ? img : rotate_image(img, ca.angle, scheme);
  return result;
}

OrbitMapping<GrayImage, double> image_orbit_mapping(InterpolationScheme scheme, double sigma) {
  return {[scheme, sigma](const GrayImage& img) { return canonicalize_image(img, scheme, sigma); },
          [scheme](const double& angle, const GrayImage& img) { return rotate_image(img, -angle, scheme); }};
}

}  // namespace orbit
