#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "orbit/cloud.hpp"
#include "orbit/image.hpp"

namespace orbit {

enum class DataKind { image, cloud };

std::string_view kind_name(DataKind k);

/// Labeled images or point clouds (exactly one of the two sample lists is
/// populated, matching `kind`).
struct LabeledDataset {
  DataKind kind = DataKind::image;
  std::vector<GrayImage> images;
  std::vector<PointCloud> clouds;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::uint64_t seed = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  /// Flattened feature count of one sample.
  std::size_t feature_dim() const;

  /// Throws DataError unless sample counts, labels and dimensions are
  /// consistent and every class has at least one sample.
  void validate() const;
};

/// Four classes (sphere shell, cube surface, cylinder surface, crossed
/// planes) with per-sample anisotropic stretch and jitter. Point 0 of every
/// sample is a fixed landmark in the positive octant; the remaining points
/// follow a fixed per-index parameterization of the surface, so coordinates
/// in generation order are comparable across samples.
LabeledDataset gen_synthetic_clouds(std::uint64_t seed, std::size_t n_per_class,
                                    std::size_t n_points = 64);

/// Four classes of soft-edged shapes (off-center disc, oriented bar, wedge,
/// two blobs) on a faint linear ramp, each in an upright pose with small
/// orientation jitter. Requires size >= 16.
LabeledDataset gen_synthetic_images(std::uint64_t seed, std::size_t n_per_class,
                                    std::size_t size = 32);

}  // namespace orbit
