#include "orbit/audit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "orbit/errors.hpp"

namespace orbit {

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

namespace {

void check_model(const LinearSoftmaxModel& model, const LabeledDataset& data, DataKind expected) {
  data.validate();
  if (data.kind != expected) {
    throw DataError("audit expects a dataset of " + std::string(kind_name(expected)) + ", got " +
                    std::string(kind_name(data.kind)));
  }
  if (model.kind != data.kind) throw DataError("model and dataset kinds differ");
  if (model.features != data.feature_dim()) {
    throw DataError("model expects " + std::to_string(model.features) + " features, dataset has " +
                    std::to_string(data.feature_dim()));
  }
}

// Fills the per-sample correctness matrix via `classify(sample, grid_point)`
// and `classify_clean(sample)`, then aggregates with integer counts.
template <class Classify, class Clean>
void run_sweep(AuditReport& r, const LabeledDataset& data, std::size_t threads, Classify&& classify,
               Clean&& classify_clean) {
  const std::size_t n = data.size();
  const std::size_t g = r.curve.size();
  r.samples = n;
  r.correct.assign(n * g, 0);
  r.clean_correct.assign(n, 0);
  r.worst_correct.assign(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    const int label = data.labels[i];
    r.clean_correct[i] = classify_clean(i) == label;
    bool all = true;
    for (std::size_t k = 0; k < g; ++k) {
      const bool ok = classify(i, k) == label;
      r.correct[i * g + k] = ok;
      all = all && ok;
    }
    r.worst_correct[i] = all;
  });
  std::size_t clean = 0;
  std::size_t worst = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    clean += r.clean_correct[i];
    worst += r.worst_correct[i];
  }
  for (std::size_t k = 0; k < g; ++k) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += r.correct[i * g + k];
    r.curve[k].correct = c;
    r.curve[k].accuracy = static_cast<double>(c) / static_cast<double>(n);
    total += c;
  }
  r.clean = static_cast<double>(clean) / static_cast<double>(n);
  r.worst = static_cast<double>(worst) / static_cast<double>(n);
  r.average = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(g));
}

}  // namespace

AuditReport evaluate_rotation_sweep_2d(const LinearSoftmaxModel& model, const LabeledDataset& data,
                                       InterpolationScheme scheme, bool canonicalize, std::size_t threads) {
  check_model(model, data, DataKind::image);
  AuditReport r;
  r.sweep = "rot2d";
  r.scheme = std::string(scheme_name(scheme));
  r.canonicalized = canonicalize;
  for (int d = 0; d < kSweepDegrees; ++d) r.curve.push_back({static_cast<double>(d), 0.0, 0, 0.0});
  run_sweep(
      r, data, threads,
      [&](std::size_t i, std::size_t k) {
        const double angle = static_cast<double>(k) * std::numbers::pi / 180.0;
        return model.predict(image_pipeline(data.images[i], angle, scheme, model.sigma, canonicalize));
      },
      [&](std::size_t i) {
        return model.predict(image_pipeline(data.images[i], 0.0, scheme, model.sigma, canonicalize));
      });
  return r;
}

AuditReport evaluate_rotation_grid_3d(const LinearSoftmaxModel& model, const LabeledDataset& data,
                                      bool canonicalize, std::size_t threads) {
  check_model(model, data, DataKind::cloud);
  AuditReport r;
  r.sweep = "rot3d";
  r.scheme = "none";
  r.canonicalized = canonicalize;
  std::vector<Mat3> rotations;
  for (int idx = 0; idx < kGridSteps * kGridSteps; ++idx) {
    r.curve.push_back({static_cast<double>(idx / kGridSteps), static_cast<double>(idx % kGridSteps), 0, 0.0});
    rotations.push_back(grid_rotation(idx));
  }
  run_sweep(
      r, data, threads,
      [&](std::size_t i, std::size_t k) {
        return model.predict(cloud_pipeline(data.clouds[i], rotations[k], 1.0, canonicalize));
      },
      [&](std::size_t i) {
        return model.predict(cloud_pipeline(data.clouds[i], identity3(), 1.0, canonicalize));
      });
  return r;
}

AuditReport evaluate_scale_sweep(const LinearSoftmaxModel& model, const LabeledDataset& data,
                                 bool canonicalize, std::size_t threads) {
  check_model(model, data, DataKind::cloud);
  AuditReport r;
  r.sweep = "scale";
  r.scheme = "none";
  r.canonicalized = canonicalize;
  for (double s : kScaleSet) r.curve.push_back({s, 0.0, 0, 0.0});
  run_sweep(
      r, data, threads,
      [&](std::size_t i, std::size_t k) {
        return model.predict(cloud_pipeline(data.clouds[i], identity3(), kScaleSet[k], canonicalize));
      },
      [&](std::size_t i) {
        return model.predict(cloud_pipeline(data.clouds[i], identity3(), 1.0, canonicalize));
      });
  return r;
}

std::vector<double> softmax_curve_image(const LinearSoftmaxModel& model, const GrayImage& img, int label,
                                        const std::vector<double>& angles, InterpolationScheme scheme,
                                        bool canonicalize) {
  if (label < 0 || static_cast<std::size_t>(label) >= model.classes) throw DataError("label out of range");
  std::vector<double> out;
  out.reserve(angles.size());
  for (double a : angles) {
    out.push_back(model.probabilities(image_pipeline(img, a, scheme, model.sigma, canonicalize))
                      [static_cast<std::size_t>(label)]);
  }
  return out;
}

std::vector<double> softmax_curve_cloud(const LinearSoftmaxModel& model, const PointCloud& cloud, int label,
                                        const std::vector<double>& angles, bool canonicalize) {
  if (label < 0 || static_cast<std::size_t>(label) >= model.classes) throw DataError("label out of range");
  std::vector<double> out;
  out.reserve(angles.size());
  for (double a : angles) {
    const Mat3 r = a == 0.0 ? identity3() : rotation_z(a);
    out.push_back(model.probabilities(cloud_pipeline(cloud, r, 1.0, canonicalize))[static_cast<std::size_t>(label)]);
  }
  return out;
}

}  // namespace orbit
