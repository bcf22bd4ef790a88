#pragma once

// Clean / average / worst-case accuracy over a transformation grid.
//
//   clean    accuracy on the untransformed data
//   average  mean accuracy over all grid points
//   worst    fraction of samples classified correctly at every grid point

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "orbit/train.hpp"

namespace orbit {

struct GridPoint {
  double param_a = 0.0;  // angle in degrees, z-angle index, or scale
  double param_b = 0.0;  // x-angle index for the 3D grid, else 0
  std::size_t correct = 0;
  double accuracy = 0.0;

  bool operator==(const GridPoint&) const = default;
};

struct AuditReport {
  std::string sweep;   // "rot2d", "rot3d" or "scale"
  std::string scheme;  // interpolation scheme for rot2d, "none" otherwise
  bool canonicalized = false;
  std::size_t samples = 0;
  double clean = 0.0;
  double average = 0.0;
  double worst = 0.0;
  std::vector<GridPoint> curve;
  std::vector<std::uint8_t> clean_correct;  // per sample
  std::vector<std::uint8_t> worst_correct;  // per sample: correct at all grid points
  std::vector<std::uint8_t> correct;        // samples x grid points, row-major by sample
};

inline constexpr std::array<double, 9> kScaleSet{0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0, 1000.0};
inline constexpr int kSweepDegrees = 360;

/// `threads` = 0 uses the hardware concurrency; results do not depend on it.
AuditReport evaluate_rotation_sweep_2d(const LinearSoftmaxModel& model, const LabeledDataset& data,
                                       InterpolationScheme scheme, bool canonicalize,
                                       std::size_t threads = 0);

AuditReport evaluate_rotation_grid_3d(const LinearSoftmaxModel& model, const LabeledDataset& data,
                                      bool canonicalize, std::size_t threads = 0);

AuditReport evaluate_scale_sweep(const LinearSoftmaxModel& model, const LabeledDataset& data,
                                 bool canonicalize, std::size_t threads = 0);

/// True-class softmax probability of an image at each rotation angle
/// (radians).
std::vector<double> softmax_curve_image(const LinearSoftmaxModel& model, const GrayImage& img, int label,
                                        const std::vector<double>& angles, InterpolationScheme scheme,
                                        bool canonicalize);

/// Same for a cloud rotated about the z axis.
std::vector<double> softmax_curve_cloud(const LinearSoftmaxModel& model, const PointCloud& cloud, int label,
                                        const std::vector<double>& angles, bool canonicalize);

/// Runs body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace orbit
