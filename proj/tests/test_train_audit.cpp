#include <doctest.h>

#include <cmath>
#include <numeric>

#include "orbit/audit.hpp"
#include "orbit/cloud.hpp"
#include "orbit/dataset.hpp"
#include "orbit/errors.hpp"
#include "orbit/train.hpp"

using namespace orbit;

namespace {

const LabeledDataset& small_clouds() {
  static const LabeledDataset d = gen_synthetic_clouds(31, 6);
  return d;
}

const LabeledDataset& small_images() {
  static const LabeledDataset d = gen_synthetic_images(32, 3, 16);
  return d;
}

void check_report_consistency(const AuditReport& r) {
  CHECK(r.worst <= r.average);
  double mean = 0.0;
  for (const auto& p : r.curve) mean += p.accuracy;
  mean /= static_cast<double>(r.curve.size());
  CHECK(std::abs(mean - r.average) <= 1e-12);
  CHECK(r.correct.size() == r.samples * r.curve.size());
}

}  // namespace

TEST_CASE("cloud generator") {
  const auto a = gen_synthetic_clouds(1, 2);
  CHECK(a.size() == 8);
  for (const auto& c : a.clouds) CHECK(c.size() == 64);
  CHECK(gen_synthetic_clouds(1, 2).clouds == a.clouds);
  CHECK(gen_synthetic_clouds(2, 2).clouds != a.clouds);
  CHECK(a.labels == std::vector<int>{0, 1, 2, 3, 0, 1, 2, 3});
  CHECK_NOTHROW(a.validate());

  // Sphere-class eigenvalue spread after stretch, over 100 samples.
  const auto many = gen_synthetic_clouds(5, 100);
  double min_spread = 1.0;
  for (std::size_t i = 0; i < many.size(); ++i) {
    if (many.labels[i] != 0) continue;
    const Vec3 s = canonicalize_similarity(many.clouds[i]).frame.singular_values;
    const double l0 = s[0] * s[0], l1 = s[1] * s[1], l2 = s[2] * s[2];
    min_spread = std::min({min_spread, (l0 - l1) / l0, (l1 - l2) / l0});
  }
  CHECK(min_spread >= 0.05);
  CHECK_THROWS(gen_synthetic_clouds(1, 0));
}

TEST_CASE("image generator") {
  const auto a = gen_synthetic_images(1, 25);
  CHECK(a.size() == 100);
  for (const auto& img : a.images) {
    CHECK(img.height() == 32);
    CHECK(img.width() == 32);
  }
  CHECK(gen_synthetic_images(1, 25).images == a.images);
  std::size_t strong = 0;
  for (const auto& img : a.images) strong += mean_gradient(SmoothImageModel(img, kDefaultSigma)).magnitude > 10 * kDegeneracyThreshold;
  CHECK(strong * 100 >= a.size() * 95);
  CHECK_THROWS(gen_synthetic_images(1, 1, 15));
}

TEST_CASE("config parsing and validation") {
  for (auto m : {TrainMode::plain, TrainMode::random_augment, TrainMode::adversarial, TrainMode::mixed,
                 TrainMode::adversarial_alp, TrainMode::adversarial_kl}) {
    CHECK(parse_mode(mode_name(m)) == m);
  }
  for (auto c : {CanonMode::off, CanonMode::train_and_test, CanonMode::test_only}) CHECK(parse_canon(canon_name(c)) == c);
  CHECK(parse_mode("adv-kl") == TrainMode::adversarial_kl);
  CHECK(parse_canon("train") == CanonMode::train_and_test);
  CHECK_THROWS(parse_mode("sgd"));
  TrainConfig bad;
  bad.k = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.lambda = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.learning_rate = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("grid rotations") {
  CHECK(grid_rotation(0) == identity3());
  const Mat3 r = grid_rotation(16 * 3 + 5);
  const Mat3 expect = multiply(rotation_z(2 * std::numbers::pi * 3 / 16), rotation_x(2 * std::numbers::pi * 5 / 16));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(r[i][j] == doctest::Approx(expect[i][j]).epsilon(1e-15));
  }
  CHECK_THROWS(grid_rotation(256));
}

TEST_CASE("plain training on canonical clouds fits the data") {
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.canonicalize = CanonMode::train_and_test;
  const auto model = train_classifier(small_clouds(), cfg);
  CHECK(training_accuracy(model, small_clouds()) >= 0.95);
  CHECK(model.features == 64 * 3);
  CHECK(model.classes == 4);
}

TEST_CASE("training is deterministic and the mode algebra holds") {
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 9;
  for (const auto* data : {&small_clouds(), &small_images()}) {
    cfg.mode = TrainMode::adversarial;
    cfg.k = 4;
    const auto adv = train_classifier(*data, cfg);
    CHECK(train_classifier(*data, cfg) == adv);

    cfg.lambda = 0.0;
    cfg.mode = TrainMode::adversarial_alp;
    CHECK(train_classifier(*data, cfg) == adv);
    cfg.mode = TrainMode::adversarial_kl;
    CHECK(train_classifier(*data, cfg) == adv);

    cfg.lambda = 0.5;
    CHECK(train_classifier(*data, cfg) != adv);
    cfg.lambda = 0.0;

    cfg.k = 1;
    cfg.mode = TrainMode::adversarial;
    const auto adv1 = train_classifier(*data, cfg);
    cfg.mode = TrainMode::random_augment;
    CHECK(train_classifier(*data, cfg) == adv1);

    cfg.mode = TrainMode::mixed;
    cfg.k = 3;
    CHECK(train_classifier(*data, cfg) == train_classifier(*data, cfg));
  }
}

TEST_CASE("non-finite loss aborts training") {
  TrainConfig cfg;
  cfg.epochs = 5;
  // Large enough that the first updates overflow the logits.
  cfg.learning_rate = 1e307;
  CHECK_THROWS_AS(train_classifier(small_clouds(), cfg), TrainingError);
}

TEST_CASE("model rejects mismatched feature vectors") {
  TrainConfig cfg;
  cfg.epochs = 1;
  const auto model = train_classifier(small_clouds(), cfg);
  CHECK_THROWS_AS(model.predict(std::vector<double>(5, 0.0)), DataError);
  CHECK_THROWS_AS(evaluate_rotation_sweep_2d(model, small_images(), InterpolationScheme::bilinear, false), DataError);
}

TEST_CASE("audits are independent of the thread count") {
  TrainConfig cfg;
  cfg.epochs = 10;
  const auto cm = train_classifier(small_clouds(), cfg);
  const auto r1 = evaluate_rotation_grid_3d(cm, small_clouds(), false, 1);
  const auto r4 = evaluate_rotation_grid_3d(cm, small_clouds(), false, 4);
  CHECK(r1.correct == r4.correct);
  CHECK(r1.average == r4.average);
  check_report_consistency(r1);
  CHECK(r1.curve[0].accuracy == r1.clean);

  const auto im = train_classifier(small_images(), cfg);
  const auto i1 = evaluate_rotation_sweep_2d(im, small_images(), InterpolationScheme::bicubic, false, 1);
  const auto i3 = evaluate_rotation_sweep_2d(im, small_images(), InterpolationScheme::bicubic, false, 3);
  CHECK(i1.correct == i3.correct);
  CHECK(i1.curve.size() == 360);
  CHECK(i1.curve[0].accuracy == i1.clean);
  check_report_consistency(i1);

  const auto s = evaluate_scale_sweep(cm, small_clouds(), false, 2);
  CHECK(s.curve.size() == 9);
  CHECK(s.curve[4].param_a == 1.0);
  CHECK(s.curve[4].accuracy == s.clean);
  check_report_consistency(s);
}

TEST_CASE("constant-prediction model gives the majority share everywhere") {
  LinearSoftmaxModel m;
  m.kind = DataKind::image;
  m.dim0 = m.dim1 = 16;
  m.classes = 4;
  m.features = 256;
  m.weights.assign(4 * 256, 0.0);
  m.bias = {0.0, 0.0, 1.0, 0.0};
  const auto r = evaluate_rotation_sweep_2d(m, small_images(), InterpolationScheme::nearest, false);
  CHECK(r.clean == 0.25);
  CHECK(r.average == 0.25);
  CHECK(r.worst == 0.25);
}

TEST_CASE("canonicalized cloud audits are exactly flat") {
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.canonicalize = CanonMode::train_and_test;
  const auto m = train_classifier(small_clouds(), cfg);
  const auto r = evaluate_rotation_grid_3d(m, small_clouds(), true);
  const auto s = evaluate_scale_sweep(m, small_clouds(), true);
  for (std::size_t i = 0; i < r.samples; ++i) {
    for (std::size_t k = 0; k < r.curve.size(); ++k) REQUIRE(r.correct[i * r.curve.size() + k] == r.clean_correct[i]);
    for (std::size_t k = 0; k < s.curve.size(); ++k) REQUIRE(s.correct[i * s.curve.size() + k] == r.clean_correct[i]);
  }
}

TEST_CASE("softmax curves") {
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.canonicalize = CanonMode::train_and_test;
  const auto cm = train_classifier(small_clouds(), cfg);
  std::vector<double> angles;
  for (int a = 0; a < 16; ++a) angles.push_back(2 * std::numbers::pi * a / 16);
  const auto curve = softmax_curve_cloud(cm, small_clouds().clouds[1], 1, angles, true);
  for (double p : curve) CHECK(std::abs(p - curve[0]) <= 1e-8);
  CHECK(curve[0] == cm.probabilities(cloud_pipeline(small_clouds().clouds[1], identity3(), 1.0, true))[1]);

  cfg.canonicalize = CanonMode::off;
  const auto im = train_classifier(small_images(), cfg);
  const GrayImage& img = small_images().images[2];
  const auto ic = softmax_curve_image(im, img, 2, {0.0, 0.5, 1.0}, InterpolationScheme::bilinear, false);
  CHECK(ic[0] == im.probabilities(image_features(img))[2]);
  CHECK_THROWS(softmax_curve_image(im, img, 7, {0.0}, InterpolationScheme::bilinear, false));

  // Interior of a constant image is unchanged by rotation; only the corners
  // see the zero fill, so the curve is flat when those weights are zero.
  LinearSoftmaxModel flat;
  flat.kind = DataKind::image;
  flat.dim0 = flat.dim1 = 16;
  flat.classes = 2;
  flat.features = 256;
  flat.weights.assign(2 * 256, 0.0);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      if (std::hypot(i + 0.5 - 8.0, j + 0.5 - 8.0) < 6.0) flat.weights[i * 16 + j] = 0.05;
    }
  }
  flat.bias = {0.0, 0.3};
  const auto fc = softmax_curve_image(flat, GrayImage(16, 16, 0.6), 0, {0.0, 0.7, 2.0, 3.3}, InterpolationScheme::bicubic, false);
  for (double p : fc) CHECK(p == doctest::Approx(fc[0]).epsilon(1e-12));
}

TEST_CASE("test-only canonicalization trains on raw data") {
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.mode = TrainMode::random_augment;
  cfg.canonicalize = CanonMode::test_only;
  const auto m = train_classifier(small_clouds(), cfg);
  CHECK(m.canonicalize_at_test());
  cfg.canonicalize = CanonMode::off;
  const auto raw = train_classifier(small_clouds(), cfg);
  CHECK(m.weights == raw.weights);
}
