#pragma once

// Rotation canonicalization of grayscale images.
//
// Coordinates: the image covers the unit square with z1 pointing up and z2
// pointing right, origin at the lower-left corner. Pixel (i, j) has its
// center at ((i + 0.5) / n, (j + 0.5) / n); row 0 is the bottom row in
// memory (the PGM/IDX readers flip their top-first rows on load).
//
// The canonical rotation makes the mean gradient of a blurred, bilinearly
// interpolated copy of the image, sampled on two circles around the center,
// point along +z1.

#include <cstddef>
#include <string_view>
#include <vector>

#include "orbit/group.hpp"

namespace orbit {

/// Grayscale raster with values clamped to [0, 1] on construction.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t height, std::size_t width, double fill = 0.0);
  /// Clamps every value into [0, 1]; throws std::invalid_argument on NaN/inf.
  explicit GrayImage(Grid pixels);

  std::size_t height() const { return pixels_.rows; }
  std::size_t width() const { return pixels_.cols; }
  bool square() const { return pixels_.rows == pixels_.cols; }

  double at(std::size_t i, std::size_t j) const { return pixels_.at(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  const Grid& grid() const { return pixels_; }
  const std::vector<double>& values() const { return pixels_.values; }

  bool operator==(const GrayImage&) const = default;

 private:
  Grid pixels_;
};

enum class InterpolationScheme { nearest, bilinear, bicubic };

std::string_view scheme_name(InterpolationScheme s);
/// Accepts "nearest", "bilinear", "bicubic".
InterpolationScheme parse_scheme(std::string_view name);

/// Catmull-Rom parameter of the cubic convolution kernel.
inline constexpr double kBicubicA = -0.5;
inline constexpr double kDefaultSigma = 1.0;
inline constexpr double kDegeneracyThreshold = 1e-8;
inline constexpr double kInnerRadius = 0.05;
inline constexpr double kOuterRadius = 0.4;
inline constexpr int kCircleSamples = 1000;

/// Separable Gaussian blur, kernel truncated at ceil(3 sigma) and normalized
/// to unit sum, edge replication at the border. Works on raw grids so that it
/// can be reused on unclamped data.
Grid gaussian_blur(const Grid& img, double sigma);
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Continuous image on [0,1]^2: bilinear interpolation of a raster with
/// edge clamping.
class SmoothImageModel {
 public:
  /// Blurs `img` with `sigma` and wraps the result.
  SmoothImageModel(const GrayImage& img, double sigma);
  /// Wraps an already prepared raster, no blur.
  explicit SmoothImageModel(Grid raster);

  double value(double z1, double z2) const;
  /// Exact derivative (d/dz1, d/dz2) of the interpolant. Cells are closed at
  /// their lower/left edges; outside the span of pixel centers the clamped
  /// axis has zero derivative.
  std::array<double, 2> gradient(double z1, double z2) const;

  const Grid& raster() const { return raster_; }

 private:
  Grid raster_;
};

struct MeanGradient {
  double g1 = 0.0;  // along z1 (up)
  double g2 = 0.0;  // along z2 (right)
  double magnitude = 0.0;
  int sample_count = 0;
};

/// Average model gradient over kCircleSamples equally spaced points on each
/// of the circles of radius kInnerRadius and kOuterRadius around the center;
/// the two circle means are averaged with equal weight.
MeanGradient mean_gradient(const SmoothImageModel& model);

struct CanonicalAngle {
  double angle = 0.0;  // radians in (-pi, pi]
  bool degenerate = false;
};

/// Rotation angle that turns the mean gradient onto +z1. Degenerate (angle 0)
/// when the magnitude does not exceed `threshold`.
CanonicalAngle canonical_angle(const MeanGradient& mg, double threshold = kDegeneracyThreshold);

/// Counter-clockwise rotation by `angle` radians about the image center by
/// inverse mapping. Samples whose source falls outside [0,1]^2 are 0.
/// Rotation by 0 is bit-exact and quarter turns are exact index permutations.
GrayImage rotate_image(const GrayImage& img, double angle, InterpolationScheme scheme);

/// Samples the raster at continuous pixel coordinates (row, col), measured
/// in pixel units with pixel centers at integers. Indices are edge-clamped.
double sample_pixel(const Grid& img, double row, double col, InterpolationScheme scheme);

using ImageCanon = CanonResult<GrayImage, double>;

/// Blur -> mean gradient -> canonical angle, then rotates the original
/// (unblurred) image by that angle. Throws std::invalid_argument for
/// non-square input or non-positive sigma.
ImageCanon canonicalize_image(const GrayImage& img, InterpolationScheme scheme,
                              double sigma = kDefaultSigma,
                              double threshold = kDegeneracyThreshold);

/// Angle only, without the final resampling.
CanonicalAngle estimate_angle(const GrayImage& img, double sigma = kDefaultSigma,
                              double threshold = kDegeneracyThreshold);

OrbitMapping<GrayImage, double> image_orbit_mapping(InterpolationScheme scheme,
                                                    double sigma = kDefaultSigma);

}  // namespace orbit
