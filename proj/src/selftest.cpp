#include "orbit/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "orbit/audit.hpp"
#include "orbit/cloud.hpp"
#include "orbit/dataset.hpp"
#include "orbit/group.hpp"
#include "orbit/image.hpp"
#include "orbit/rng.hpp"
#include "orbit/train.hpp"
#include "orbit/vector.hpp"

namespace orbit {

namespace {

Mat3 random_rotation(Rng& rng) {
  double q[4];
  double n = 0.0;
  do {
    n = 0.0;
    for (double& v : q) {
      v = rng.normal();
      n += v * v;
    }
  } while (n < 1e-12);
  n = std::sqrt(n);
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  return Mat3{{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
               {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
               {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

double wrap_angle(double a) {
  a = std::fmod(a + std::numbers::pi, 2.0 * std::numbers::pi);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a - std::numbers::pi;
}

CheckResult check_groups() {
  Rng rng(11);
  std::vector<Grid> grids;
  for (int s = 0; s < 4; ++s) {
    Grid g(6, 6);
    for (double& v : g.values) v = rng.uniform();
    grids.push_back(g);
  }
  std::vector<RealVector> vecs;
  for (int s = 0; s < 4; ++s) vecs.push_back({rng.normal(), rng.normal(), rng.normal(), rng.normal()});
  if (auto bad = check_group_axioms(cyclic4_group(), grids)) return {"group axioms", false, "C4: " + *bad};
  if (auto bad = check_group_axioms(symmetric_group(4), vecs)) return {"group axioms", false, "S4: " + *bad};
  return {"group axioms", true, "C4 on 6x6 grids, S4 on R^4"};
}

CheckResult check_averaging() {
  Rng rng(12);
  const std::array<double, 9> kernel{0.3, -1.0, 0.5, 2.0, 0.1, -0.7, 0.25, 1.5, -0.2};
  const auto c4 = cyclic4_group();
  auto inner = [&](const Grid& g) { return cross_correlate3(g, kernel); };
  for (int s = 0; s < 20; ++s) {
    Grid x(8, 8);
    for (double& v : x.values) v = rng.normal();
    const Grid fx = equivariant_average(x, c4, inner);
    for (int k = 1; k < 4; ++k) {
      if (!(equivariant_average(quarter_turn(x, k), c4, inner) == quarter_turn(fx, k))) {
        return {"equivariant averaging", false, "C4 mismatch on sample " + std::to_string(s)};
      }
    }
  }
  const auto s3 = symmetric_group(3);
  auto vinner = [](const RealVector& v) { return RealVector{v[0] * v[1], v[2] - v[0], v[1] * v[1]}; };
  for (int s = 0; s < 20; ++s) {
    const RealVector x{rng.normal(), rng.normal(), rng.normal()};
    const RealVector fx = equivariant_average(x, s3, vinner);
    for (const auto& p : s3.elements) {
      if (equivariant_average(permute(p, x), s3, vinner) != permute(p, fx)) {
        return {"equivariant averaging", false, "S3 mismatch on sample " + std::to_string(s)};
      }
    }
  }
  return {"equivariant averaging", true, "exact for C4 (8x8) and S3"};
}

CheckResult check_sort_oracle() {
  Rng rng(13);
  for (int s = 0; s < 300; ++s) {
    const std::size_t n = 1 + rng.below(6);
    RealVector x(n);
    for (double& v : x) v = static_cast<double>(static_cast<int>(rng.below(7)) - 3);
    double best = -1.0;
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    do {
      best = std::max(best, sort_energy(permute(p, x)));
    } while (std::next_permutation(p.begin(), p.end()));
    const auto c = sort_canonicalize(x);
    if (sort_energy(c.canonical) != best || permute(c.element, x) != c.canonical) {
      return {"sort oracle", false, "mismatch on sample " + std::to_string(s)};
    }
  }
  return {"sort oracle", true, "300 vectors, n <= 6, exhaustive"};
}

CheckResult check_eig() {
  Rng rng(14);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) c[i][j] = c[j][i] = rng.normal();
    }
    const Eigen3 e = eig3_sym(c);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double r = 0.0;
        for (int k = 0; k < 3; ++k) r += e.vectors[i][k] * e.values[k] * e.vectors[j][k];
        worst = std::max(worst, std::abs(r - c[i][j]));
      }
    }
  }
  std::ostringstream os;
  os << "max reconstruction error " << worst;
  return {"eigendecomposition", worst <= 1e-10, os.str()};
}

CheckResult check_cloud_invariance() {
  Rng rng(15);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    PointCloud x;
    for (int i = 0; i < 40; ++i) x.points.push_back({2.0 * rng.normal(), rng.normal(), 0.5 * rng.normal()});
    const PointCloud cx = canonicalize_similarity(x).cloud;
    for (int t = 0; t < 20; ++t) {
      const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
      const Vec3 shift{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
      const PointCloud y = translate_points(scale_points(rotate_points(x, random_rotation(rng)), scale), shift);
      worst = std::max(worst, max_abs_diff(cx, canonicalize_similarity(y).cloud));
    }
  }
  std::ostringstream os;
  os << "max canonical difference " << worst;
  return {"cloud invariance", worst <= 1e-8, os.str()};
}

CheckResult check_gradient() {
  Rng rng(16);
  Grid raster(16, 16);
  for (double& v : raster.values) v = rng.uniform();
  const SmoothImageModel model(GrayImage(raster), 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  int used = 0;
  while (used < 200) {
    const double z1 = rng.uniform(0.05, 0.95);
    const double z2 = rng.uniform(0.05, 0.95);
    // Skip points within a step of a cell boundary where the interpolant kinks.
    const double u1 = z1 * 16.0 - 0.5, u2 = z2 * 16.0 - 0.5;
    const double edge = 16.0 * h * 2.0;
    if (std::abs(u1 - std::round(u1)) < edge || std::abs(u2 - std::round(u2)) < edge) continue;
    const auto g = model.gradient(z1, z2);
    const double d1 = (model.value(z1 + h, z2) - model.value(z1 - h, z2)) / (2.0 * h);
    const double d2 = (model.value(z1, z2 + h) - model.value(z1, z2 - h)) / (2.0 * h);
    worst = std::max({worst, std::abs(d1 - g[0]), std::abs(d2 - g[1])});
    ++used;
  }
  std::ostringstream os;
  os << "max finite-difference error " << worst;
  return {"image gradient", worst <= 1e-6, os.str()};
}

CheckResult check_angles() {
  const auto data = gen_synthetic_images(17, 1);
  int good = 0, total = 0;
  for (const auto& img : data.images) {
    const double a0 = estimate_angle(img).angle;
    for (int d = 0; d < 360; d += 10) {
      const double beta = d * std::numbers::pi / 180.0;
      const double a = estimate_angle(rotate_image(img, beta, InterpolationScheme::bilinear)).angle;
      good += std::abs(wrap_angle(a - a0 + beta)) <= 2.0 * std::numbers::pi / 180.0;
      ++total;
    }
  }
  std::ostringstream os;
  os << good << "/" << total << " rotations within 2 degrees";
  return {"image angle consistency", good * 100 >= total * 95, os.str()};
}

CheckResult check_cloud_audit() {
  const auto data = gen_synthetic_clouds(18, 5);
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.canonicalize = CanonMode::train_and_test;
  const auto model = train_classifier(data, cfg);
  const auto rot = evaluate_rotation_grid_3d(model, data, true, 1);
  const auto scale = evaluate_scale_sweep(model, data, true, 1);
  bool same = rot.clean == rot.worst && rot.clean == rot.average && scale.clean == scale.worst &&
              scale.clean == scale.average;
  for (std::size_t i = 0; i < data.size() && same; ++i) {
    const std::uint8_t c = rot.clean_correct[i];
    for (std::size_t k = 0; k < rot.curve.size(); ++k) same = same && rot.correct[i * rot.curve.size() + k] == c;
    for (std::size_t k = 0; k < scale.curve.size(); ++k) {
      same = same && scale.correct[i * scale.curve.size() + k] == c;
    }
  }
  return {"canonicalized 3D audit", same, same ? "flags identical over 256 rotations and 9 scales"
                                               : "per-sample flags differ"};
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  const std::vector<std::function<CheckResult()>> checks{check_groups,      check_averaging,        check_sort_oracle,
                                                         check_eig,         check_cloud_invariance, check_gradient,
                                                         check_angles,      check_cloud_audit};
  std::vector<CheckResult> out;
  for (const auto& c : checks) {
    try {
      out.push_back(c());
    } catch (const std::exception& e) {
      out.push_back({"exception", false, e.what()});
    }
  }
  return out;
}

}  // namespace orbit
