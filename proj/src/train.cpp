#include "orbit/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "orbit/errors.hpp"
#include "orbit/rng.hpp"

namespace orbit {

std::string_view mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::plain: return "plain";
    case TrainMode::random_augment: return "ra";
    case TrainMode::adversarial: return "adv";
    case TrainMode::mixed: return "mixed";
    case TrainMode::adversarial_alp: return "adv-alp";
    case TrainMode::adversarial_kl: return "adv-kl";
  }
  return "unknown";
}

TrainMode parse_mode(std::string_view s) {
  for (auto m : {TrainMode::plain, TrainMode::random_augment, TrainMode::adversarial, TrainMode::mixed,
                 TrainMode::adversarial_alp, TrainMode::adversarial_kl}) {
    if (s == mode_name(m)) return m;
  }
  throw std::invalid_argument("unknown training mode '" + std::string(s) + "'");
}

std::string_view canon_name(CanonMode m) {
  switch (m) {
    case CanonMode::off: return "off";
    case CanonMode::train_and_test: return "train";
    case CanonMode::test_only: return "test";
  }
  return "unknown";
}

CanonMode parse_canon(std::string_view s) {
  for (auto m : {CanonMode::off, CanonMode::train_and_test, CanonMode::test_only}) {
    if (s == canon_name(m)) return m;
  }
  throw std::invalid_argument("unknown canonicalization mode '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (k < 1) throw std::invalid_argument("TrainConfig: K must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("TrainConfig: lambda must be >= 0");
  if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("TrainConfig: learning rate must be positive");
  }
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch size must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("TrainConfig: sigma must be positive");
}

Mat3 grid_rotation(int index) {
  if (index < 0 || index >= kGridSteps * kGridSteps) {
    throw std::invalid_argument("grid_rotation: index out of range");
  }
  const double step = 2.0 * std::numbers::pi / kGridSteps;
  return multiply(rotation_z(step * (index / kGridSteps)), rotation_x(step * (index % kGridSteps)));
}

std::vector<double> LinearSoftmaxModel::logits(std::span<const double> x) const {
  if (x.size() != features) {
    throw DataError("model expects " + std::to_string(features) + " features, got " + std::to_string(x.size()));
  }
  std::vector<double> z(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    const double* w = weights.data() + c * features;
    double acc = bias[c];
    for (std::size_t f = 0; f < features; ++f) acc += w[f] * x[f];
    z[c] = acc;
  }
  return z;
}

namespace {

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> log_softmax(const std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - m);
  const double lse = m + std::log(s);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] - lse;
  return out;
}

std::vector<double> exp_all(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double a) { return std::exp(a); });
  return out;
}

}  // namespace

std::vector<double> LinearSoftmaxModel::probabilities(std::span<const double> x) const {
  return exp_all(log_softmax(logits(x)));
}

int LinearSoftmaxModel::predict(std::span<const double> x) const {
  const auto z = logits(x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

std::vector<double> image_features(const GrayImage& img) { return img.values(); }

std::vector<double> cloud_features(const PointCloud& cloud) {
  std::vector<double> f;
  f.reserve(3 * cloud.size());
  for (const auto& p : cloud.points) f.insert(f.end(), p.begin(), p.end());
  return f;
}

std::vector<double> image_pipeline(const GrayImage& img, double angle, InterpolationScheme scheme,
                                   double sigma, bool canonicalize) {
  GrayImage x = angle == 0.0 ? img : rotate_image(img, angle, scheme);
  if (canonicalize) x = canonicalize_image(x, scheme, sigma).canonical;
  return image_features(x);
}

std::vector<double> cloud_pipeline(const PointCloud& cloud, const Mat3& rotation, double scale,
                                   bool canonicalize) {
  PointCloud x = rotate_points(cloud, rotation);
  if (scale != 1.0) x = scale_points(x, scale);
  if (canonicalize) x = canonicalize_similarity(x).cloud;
  return cloud_features(x);
}

namespace {

class Trainer {
 public:
  Trainer(const LabeledDataset& data, const TrainConfig& cfg)
      : data_(data), cfg_(cfg), rng_(cfg.seed), canon_(cfg.canonicalize == CanonMode::train_and_test) {
    model_.kind = data.kind;
    if (data.kind == DataKind::image) {
      model_.dim0 = data.images.front().height();
      model_.dim1 = data.images.front().width();
    } else {
      model_.dim0 = data.clouds.front().size();
      model_.dim1 = 3;
    }
    model_.canonicalize = cfg.canonicalize;
    model_.scheme = cfg.scheme;
    model_.sigma = cfg.sigma;
    model_.classes = data.num_classes();
    model_.features = data.feature_dim();
    model_.weights.assign(model_.classes * model_.features, 0.0);
    model_.bias.assign(model_.classes, 0.0);
    clean_.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) clean_.push_back(features(i, Transform{}));
  }

  LinearSoftmaxModel run() {
    std::vector<std::size_t> order(data_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    grad_w_.assign(model_.weights.size(), 0.0);
    grad_b_.assign(model_.bias.size(), 0.0);
    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
      rng_.shuffle(order);
      for (std::size_t start = 0; start < order.size(); start += cfg_.batch_size) {
        const std::size_t stop = std::min(order.size(), start + cfg_.batch_size);
        std::fill(grad_w_.begin(), grad_w_.end(), 0.0);
        std::fill(grad_b_.begin(), grad_b_.end(), 0.0);
        for (std::size_t b = start; b < stop; ++b) step_sample(order[b], epoch);
        const double scale = cfg_.learning_rate / static_cast<double>(stop - start);
        for (std::size_t i = 0; i < grad_w_.size(); ++i) model_.weights[i] -= scale * grad_w_[i];
        for (std::size_t i = 0; i < grad_b_.size(); ++i) model_.bias[i] -= scale * grad_b_[i];
      }
    }
    return model_;
  }

 private:
  Transform draw() {
    Transform t;
    if (data_.kind == DataKind::image) {
      t.angle = 2.0 * std::numbers::pi * rng_.uniform();
    } else {
      t.grid_index = static_cast<int>(rng_.below(kGridSteps * kGridSteps));
    }
    return t;
  }

  std::vector<double> features(std::size_t i, const Transform& t) const {
    if (data_.kind == DataKind::image) {
      return image_pipeline(data_.images[i], t.angle, cfg_.scheme, cfg_.sigma, canon_);
    }
    return cloud_pipeline(data_.clouds[i], grid_rotation(t.grid_index), 1.0, canon_);
  }

  // Accumulates g_z x^T into the weight gradient and g_z into the bias.
  void add_gradient(const std::vector<double>& g_z, const std::vector<double>& x, bool with_bias = true) {
    for (std::size_t c = 0; c < model_.classes; ++c) {
      double* gw = grad_w_.data() + c * model_.features;
      const double gc = g_z[c];
      for (std::size_t f = 0; f < model_.features; ++f) gw[f] += gc * x[f];
      if (with_bias) grad_b_[c] += gc;
    }
  }

  double cross_entropy(const std::vector<double>& x, int label, std::vector<double>* g_z) const {
    const auto lp = log_softmax(model_.logits(x));
    if (g_z) {
      *g_z = exp_all(lp);
      (*g_z)[static_cast<std::size_t>(label)] -= 1.0;
    }
    return -lp[static_cast<std::size_t>(label)];
  }

  void check_finite(double loss, std::size_t i, int epoch) const {
    if (!std::isfinite(loss)) {
      throw TrainingError("non-finite loss " + short_real(loss) + " at epoch " + std::to_string(epoch) +
                          ", sample " + std::to_string(i) + " (mode " + std::string(mode_name(cfg_.mode)) +
                          ", learning rate " + short_real(cfg_.learning_rate) + ")");
    }
  }

  void step_sample(std::size_t i, int epoch) {
    const int label = data_.labels[i];
    std::vector<double> g;
    switch (cfg_.mode) {
      case TrainMode::plain: {
        check_finite(cross_entropy(clean_[i], label, &g), i, epoch);
        add_gradient(g, clean_[i]);
        return;
      }
      case TrainMode::random_augment: {
        const auto x = features(i, draw());
        check_finite(cross_entropy(x, label, &g), i, epoch);
        add_gradient(g, x);
        return;
      }
      default:
        break;
    }

    // Worst of K: all transforms are drawn before any is evaluated.
    std::vector<Transform> candidates;
    for (int k = 0; k < cfg_.k; ++k) candidates.push_back(draw());
    std::vector<double> adv;
    double worst = -1.0;
    for (const auto& t : candidates) {
      auto x = features(i, t);
      const double loss = cross_entropy(x, label, nullptr);
      check_finite(loss, i, epoch);
      if (adv.empty() || loss > worst) {
        worst = loss;
        adv = std::move(x);
      }
    }
    cross_entropy(adv, label, &g);
    add_gradient(g, adv);

    const auto& clean = clean_[i];
    switch (cfg_.mode) {
      case TrainMode::mixed: {
        check_finite(cross_entropy(clean, label, &g), i, epoch);
        add_gradient(g, clean);
        break;
      }
      case TrainMode::adversarial_alp: {
        // lambda * ||z - z_adv||^2; the bias cancels between the two terms.
        const auto z = model_.logits(clean);
        const auto za = model_.logits(adv);
        std::vector<double> gz(z.size());
        std::vector<double> gza(z.size());
        for (std::size_t c = 0; c < z.size(); ++c) {
          gz[c] = 2.0 * cfg_.lambda * (z[c] - za[c]);
          gza[c] = -gz[c];
        }
        add_gradient(gz, clean, false);
        add_gradient(gza, adv, false);
        break;
      }
      case TrainMode::adversarial_kl: {
        // lambda * KL(p || p_adv)
        const auto lp = log_softmax(model_.logits(clean));
        const auto lpa = log_softmax(model_.logits(adv));
        const auto p = exp_all(lp);
        const auto pa = exp_all(lpa);
        double kl = 0.0;
        for (std::size_t c = 0; c < p.size(); ++c) kl += p[c] * (lp[c] - lpa[c]);
        check_finite(kl, i, epoch);
        std::vector<double> gz(p.size());
        std::vector<double> gza(p.size());
        for (std::size_t c = 0; c < p.size(); ++c) {
          gz[c] = cfg_.lambda * p[c] * (lp[c] - lpa[c] - kl);
          gza[c] = cfg_.lambda * (pa[c] - p[c]);
        }
        add_gradient(gz, clean);
        add_gradient(gza, adv);
        break;
      }
      default:
        break;
    }
  }

  const LabeledDataset& data_;
  const TrainConfig& cfg_;
  Rng rng_;
  bool canon_;
  LinearSoftmaxModel model_;
  std::vector<std::vector<double>> clean_;
  std::vector<double> grad_w_;
  std::vector<double> grad_b_;
};

}  // namespace

LinearSoftmaxModel train_classifier(const LabeledDataset& data, const TrainConfig& cfg) {
  cfg.validate();
  data.validate();
  return Trainer(data, cfg).run();
}

double training_accuracy(const LinearSoftmaxModel& model, const LabeledDataset& data) {
  data.validate();
  std::size_t correct = 0;
  const bool canon = model.canonicalize_at_test();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.kind == DataKind::image
                       ? image_pipeline(data.images[i], 0.0, model.scheme, model.sigma, canon)
                       : cloud_pipeline(data.clouds[i], identity3(), 1.0, canon);
    if (model.predict(x) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace orbit
