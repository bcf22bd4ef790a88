#pragma once

// Linear softmax classifier and the training modes used as baselines:
// plain, random augmentation, worst-of-K adversarial, mixed, and the two
// regularized adversarial variants (logit pairing, KL).

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "orbit/dataset.hpp"

namespace orbit {

enum class TrainMode { plain, random_augment, adversarial, mixed, adversarial_alp, adversarial_kl };
enum class CanonMode { off, train_and_test, test_only };

/// CLI spellings: plain, ra, adv, mixed, adv-alp, adv-kl.
std::string_view mode_name(TrainMode m);
TrainMode parse_mode(std::string_view s);
/// CLI spellings: off, train, test.
std::string_view canon_name(CanonMode m);
CanonMode parse_canon(std::string_view s);

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainConfig {
  TrainMode mode = TrainMode::plain;
  int k = 10;
  double lambda = 0.0;
  int epochs = 60;
  double learning_rate = 0.5;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
  CanonMode canonicalize = CanonMode::off;
  /// Resampling used for image augmentation and image canonicalization.
  InterpolationScheme scheme = InterpolationScheme::bilinear;
  double sigma = kDefaultSigma;

  /// Throws std::invalid_argument on K < 1, negative lambda, etc.
  void validate() const;
};

/// One orbit transform: an image rotation angle, or an index into the
/// 16 x 16 cloud rotation grid.
struct Transform {
  double angle = 0.0;
  int grid_index = 0;
};

inline constexpr int kGridSteps = 16;

/// Rz(2 pi a / 16) * Rx(2 pi b / 16) for index = 16 a + b.
Mat3 grid_rotation(int index);

struct LinearSoftmaxModel {
  DataKind kind = DataKind::image;
  /// Input shape: (height, width) for images, (points, 3) for clouds.
  std::size_t dim0 = 0;
  std::size_t dim1 = 0;
  CanonMode canonicalize = CanonMode::off;
  InterpolationScheme scheme = InterpolationScheme::bilinear;
  double sigma = kDefaultSigma;
  std::size_t classes = 0;
  std::size_t features = 0;
  std::vector<double> weights;  // classes x features, row-major
  std::vector<double> bias;     // classes

  std::vector<double> logits(std::span<const double> x) const;
  std::vector<double> probabilities(std::span<const double> x) const;
  /// Index of the largest logit (first one on ties).
  int predict(std::span<const double> x) const;

  bool canonicalize_at_test() const { return canonicalize != CanonMode::off; }
  bool operator==(const LinearSoftmaxModel&) const = default;
};

std::vector<double> image_features(const GrayImage& img);
std::vector<double> cloud_features(const PointCloud& cloud);

/// Features of a transformed image, optionally canonicalized afterwards.
std::vector<double> image_pipeline(const GrayImage& img, double angle, InterpolationScheme scheme,
                                   double sigma, bool canonicalize);
/// Features of a cloud after p -> scale * R p, optionally canonicalized
/// afterwards.
std::vector<double> cloud_pipeline(const PointCloud& cloud, const Mat3& rotation, double scale,
                                   bool canonicalize);

LinearSoftmaxModel train_classifier(const LabeledDataset& data, const TrainConfig& cfg);

/// Fraction of samples predicted correctly without any transform (the
/// model's own canonicalization setting applies).
double training_accuracy(const LinearSoftmaxModel& model, const LabeledDataset& data);

}  // namespace orbit
