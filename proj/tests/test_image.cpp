#include <doctest.h>

#include <cmath>
#include <numbers>

#include "orbit/dataset.hpp"
#include "orbit/image.hpp"
#include "orbit/rng.hpp"
#include "support.hpp"

using namespace orbit;
using testing_support::degrees;
using testing_support::wrap_angle;

namespace {

constexpr double kPi = std::numbers::pi;

// u(z) = z1 (vertical) or z2 (horizontal), sampled at pixel centers.
GrayImage ramp(std::size_t n, bool vertical) {
  Grid g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g.at(i, j) = (static_cast<double>(vertical ? i : j) + 0.5) / static_cast<double>(n);
  }
  return GrayImage(g);
}

double disc_mean_abs_diff(const GrayImage& a, const GrayImage& b, double radius) {
  const double n = static_cast<double>(a.height());
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < a.height(); ++i) {
    for (std::size_t j = 0; j < a.width(); ++j) {
      if (std::hypot((i + 0.5) / n - 0.5, (j + 0.5) / n - 0.5) > radius) continue;
      sum += std::abs(a.at(i, j) - b.at(i, j));
      ++count;
    }
  }
  return sum / count;
}

const InterpolationScheme kAll[] = {InterpolationScheme::nearest, InterpolationScheme::bilinear,
                                    InterpolationScheme::bicubic};

}  // namespace

TEST_CASE("GrayImage clamps and rejects non-finite values") {
  const GrayImage img(Grid(1, 3, std::vector<double>{-0.5, 0.25, 2.0}));
  CHECK(img.values() == std::vector<double>{0.0, 0.25, 1.0});
  CHECK_THROWS_AS(GrayImage(Grid(1, 1, std::vector<double>{std::nan("")})), std::invalid_argument);
  CHECK_THROWS_AS(GrayImage(Grid(1, 1, std::vector<double>{INFINITY})), std::invalid_argument);
}

TEST_CASE("scheme names round-trip") {
  for (auto s : kAll) CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK_THROWS(parse_scheme("lanczos"));
}

TEST_CASE("gaussian_blur") {
  SUBCASE("constant image is unchanged") {
    const GrayImage c(9, 9, 0.5);
    for (double s : {0.3, 1.0, 2.5}) {
      const GrayImage b = gaussian_blur(c, s);
      for (double v : b.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
    }
  }
  SUBCASE("impulse at the center of a 9x9 image") {
    Grid g(9, 9);
    g.at(4, 4) = 1.0;
    const Grid b = gaussian_blur(g, 1.0);
    // Kernel oracle: radius ceil(3 sigma) = 3, weights exp(-k^2 / 2), unit sum.
    double norm = 0.0;
    for (int k = -3; k <= 3; ++k) norm += std::exp(-0.5 * k * k);
    const double w0 = 1.0 / norm;
    const double w1 = std::exp(-0.5) / norm;
    CHECK(b.at(4, 4) == doctest::Approx(w0 * w0).epsilon(1e-14));
    CHECK(b.at(4, 5) == doctest::Approx(w0 * w1).epsilon(1e-14));
    CHECK(b.at(4, 8) == 0.0);
    double mass = 0.0;
    for (double v : b.values) mass += v;
    CHECK(std::abs(mass - 1.0) <= 1e-12);
  }
  SUBCASE("1D ramp keeps its midpoint") {
    const Grid b = gaussian_blur(Grid(1, 3, std::vector<double>{0, 0.5, 1}), 1.0);
    CHECK(b.at(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("non-positive sigma is rejected") {
    CHECK_THROWS_AS(gaussian_blur(GrayImage(4, 4), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_blur(GrayImage(4, 4), -1.0), std::invalid_argument);
  }
}

TEST_CASE("smooth model gradient") {
  SUBCASE("ramps") {
    const SmoothImageModel v(ramp(32, true), 1.0);
    const SmoothImageModel h(ramp(32, false), 1.0);
    for (double z1 : {0.3, 0.47, 0.61}) {
      for (double z2 : {0.35, 0.5, 0.72}) {
        const auto gv = v.gradient(z1, z2);
        const auto gh = h.gradient(z1, z2);
        CHECK(gv[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(gv[1]) <= 1e-9);
        CHECK(std::abs(gh[0]) <= 1e-9);
        CHECK(gh[1] == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
  SUBCASE("constant image") {
    const SmoothImageModel m(GrayImage(16, 16, 0.3), 1.0);
    for (double z : {0.0, 0.2, 0.5, 1.0}) CHECK(m.gradient(z, 1.0 - z) == std::array<double, 2>{0.0, 0.0});
  }
  SUBCASE("affine inside a cell, lower-left closed boundaries") {
    const SmoothImageModel m(Grid(2, 2, std::vector<double>{0, 1, 2, 5}));
    // Centers at 0.25 and 0.75; one cell spans the whole center square.
    CHECK(m.value(0.25, 0.25) == 0.0);
    CHECK(m.value(0.75, 0.75) == 5.0);
    CHECK(m.value(0.5, 0.5) == doctest::Approx(2.0));
    const auto g = m.gradient(0.5, 0.5);
    // d/dz1 at the z2 midpoint: ((2 + 5) - (0 + 1)) / 2 per half unit.
    CHECK(g[0] == doctest::Approx(6.0));
    CHECK(g[1] == doctest::Approx(4.0));
    // Outside the span of centers the clamped axis has zero slope.
    CHECK(m.gradient(0.1, 0.5)[0] == 0.0);
    CHECK(m.gradient(0.5, 0.9)[1] == 0.0);
  }
  SUBCASE("finite differences at random interior points") {
    Rng rng(3);
    Grid raster(12, 12);
    for (double& v : raster.values) v = rng.uniform();
    const SmoothImageModel m(GrayImage(raster), 0.8);
    const double h = 1e-5;
    int used = 0;
    while (used < 1000) {
      const double z1 = rng.uniform(0.06, 0.94), z2 = rng.uniform(0.06, 0.94);
      const double c1 = z1 * 12 - 0.5, c2 = z2 * 12 - 0.5;
      if (std::abs(c1 - std::round(c1)) < 24 * h || std::abs(c2 - std::round(c2)) < 24 * h) continue;
      const auto g = m.gradient(z1, z2);
      REQUIRE(std::abs((m.value(z1 + h, z2) - m.value(z1 - h, z2)) / (2 * h) - g[0]) <= 1e-6);
      REQUIRE(std::abs((m.value(z1, z2 + h) - m.value(z1, z2 - h)) / (2 * h) - g[1]) <= 1e-6);
      ++used;
    }
  }
}

TEST_CASE("mean gradient and canonical angle") {
  const MeanGradient up = mean_gradient(SmoothImageModel(ramp(64, true), 1.0));
  CHECK(std::abs(up.g1 - 1.0) <= 1e-3);
  CHECK(std::abs(up.g2) <= 1e-3);
  CHECK(std::abs(up.magnitude - 1.0) <= 1e-3);
  CHECK(up.sample_count == 2 * kCircleSamples);
  const MeanGradient right = mean_gradient(SmoothImageModel(ramp(64, false), 1.0));
  CHECK(std::abs(right.g1) <= 1e-3);
  CHECK(std::abs(right.g2 - 1.0) <= 1e-3);
  CHECK(mean_gradient(SmoothImageModel(GrayImage(32, 32, 0.4), 1.0)).magnitude == 0.0);

  CanonicalAngle a = canonical_angle({1.0, 0.0, 1.0, 0});
  CHECK(a.angle == 0.0);
  CHECK_FALSE(a.degenerate);
  a = canonical_angle({0.0, 1.0, 1.0, 0});
  CHECK(a.angle == doctest::Approx(kPi / 2));
  a = canonical_angle({0.0, 0.0, 0.0, 0});
  CHECK(a.angle == 0.0);
  CHECK(a.degenerate);
  // Pointing straight down maps to +pi, never -pi.
  CHECK(canonical_angle({-1.0, -0.0, 1.0, 0}).angle == kPi);

  // Rotating the horizontal ramp by the returned angle points its gradient up.
  const GrayImage h = ramp(64, false);
  const double alpha = estimate_angle(h).angle;
  CHECK(alpha == doctest::Approx(kPi / 2).epsilon(1e-3));
  const MeanGradient after = mean_gradient(SmoothImageModel(rotate_image(h, alpha, InterpolationScheme::bilinear), 1.0));
  CHECK(after.g1 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(after.g2) <= 1e-3);
}

TEST_CASE("rotate_image") {
  Rng rng(4);
  Grid g(9, 9);
  for (double& v : g.values) v = rng.uniform();
  const GrayImage img(g);
  for (auto s : kAll) CHECK(rotate_image(img, 0.0, s) == img);
  for (int k = 1; k < 4; ++k) {
    CHECK(rotate_image(img, k * kPi / 2, InterpolationScheme::nearest).grid() == quarter_turn(g, k));
  }
  CHECK_THROWS_AS(rotate_image(GrayImage(4, 5), 0.3, InterpolationScheme::bilinear), std::invalid_argument);

  // Two half turns on the synthetic suite.
  const auto data = gen_synthetic_images(21, 3);
  for (const auto& u : data.images) {
    const GrayImage twice = rotate_image(rotate_image(u, kPi, InterpolationScheme::bilinear), kPi,
                                         InterpolationScheme::bilinear);
    CHECK(disc_mean_abs_diff(twice, u, 0.35) <= 2e-2);
  }

  // Corners land outside the domain and are filled with zero.
  const GrayImage white(16, 16, 1.0);
  const GrayImage turned = rotate_image(white, kPi / 4, InterpolationScheme::bilinear);
  CHECK(turned.at(0, 0) == 0.0);
  CHECK(turned.at(8, 8) == 1.0);
}

TEST_CASE("sample_pixel") {
  const Grid g(2, 2, std::vector<double>{0, 1, 2, 3});
  for (auto s : kAll) {
    CHECK(sample_pixel(g, 0, 0, s) == 0.0);
    CHECK(sample_pixel(g, 1, 1, s) == 3.0);
  }
  CHECK(sample_pixel(g, 0.5, 0.5, InterpolationScheme::bilinear) == 1.5);
  CHECK(sample_pixel(g, 0.4, 0.6, InterpolationScheme::nearest) == 1.0);
  // Catmull-Rom reproduces linear data in the interior.
  Grid lin(6, 6);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) lin.at(i, j) = 0.1 * i + 0.05 * j;
  }
  CHECK(sample_pixel(lin, 2.3, 2.7, InterpolationScheme::bicubic) == doctest::Approx(0.1 * 2.3 + 0.05 * 2.7));
}

TEST_CASE("canonicalize_image") {
  SUBCASE("constant image is degenerate and returned unchanged") {
    const GrayImage c(16, 16, 0.7);
    const ImageCanon r = canonicalize_image(c, InterpolationScheme::bilinear);
    CHECK(r.degenerate);
    CHECK(r.element == 0.0);
    CHECK(r.canonical == c);
  }
  SUBCASE("already canonical ramp is a fixed point") {
    const GrayImage up = ramp(32, true);
    const ImageCanon r = canonicalize_image(up, InterpolationScheme::bilinear);
    CHECK(std::abs(r.element) <= 1e-9);
    CHECK(disc_mean_abs_diff(r.canonical, up, 0.45) <= 1e-6);
  }
  SUBCASE("30 degree ramp is recovered") {
    const GrayImage up = ramp(32, true);
    const GrayImage tilted = rotate_image(up, kPi / 6, InterpolationScheme::bilinear);
    const ImageCanon r = canonicalize_image(tilted, InterpolationScheme::bilinear);
    CHECK(std::abs(degrees(wrap_angle(r.element + kPi / 6))) <= 2.0);
    const ImageCanon r0 = canonicalize_image(up, InterpolationScheme::bilinear);
    CHECK(disc_mean_abs_diff(r.canonical, r0.canonical, 0.35) <= 0.03);
  }
  SUBCASE("non-square input and bad sigma are rejected") {
    CHECK_THROWS_AS(canonicalize_image(GrayImage(8, 9), InterpolationScheme::bilinear), std::invalid_argument);
    CHECK_THROWS_AS(canonicalize_image(GrayImage(8, 8), InterpolationScheme::bilinear, 0.0), std::invalid_argument);
  }
  SUBCASE("fixed point and angle consistency on the synthetic suite") {
    const auto data = gen_synthetic_images(22, 4);
    for (const auto& u : data.images) {
      const ImageCanon r = canonicalize_image(u, InterpolationScheme::bilinear);
      REQUIRE(r.energy > 10 * kDegeneracyThreshold);
      CHECK(std::abs(estimate_angle(r.canonical).angle) <= 0.01);
      int good = 0;
      for (int d = 0; d < 360; d += 5) {
        const double beta = d * kPi / 180.0;
        const double a = estimate_angle(rotate_image(u, beta, InterpolationScheme::bilinear)).angle;
        good += std::abs(degrees(wrap_angle(a - r.element + beta))) <= 2.0;
      }
      CHECK(good >= 69);  // 95% of 72
    }
  }
  SUBCASE("mean gradient rotates with the image") {
    // At 32 pixels the resampling error alone reaches about 2%; 64 pixels
    // keeps it under 1%.
    const auto data = gen_synthetic_images(23, 2, 64);
    for (const auto& u : data.images) {
      const MeanGradient m0 = mean_gradient(SmoothImageModel(u, 1.0));
      for (double beta : {0.4, 1.3, 2.9, 4.4}) {
        const MeanGradient m = mean_gradient(SmoothImageModel(rotate_image(u, beta, InterpolationScheme::bilinear), 1.0));
        // Counter-clockwise turn in the (right, up) plane.
        const double e2 = m0.g2 * std::cos(beta) - m0.g1 * std::sin(beta);
        const double e1 = m0.g2 * std::sin(beta) + m0.g1 * std::cos(beta);
        CHECK(std::hypot(m.g1 - e1, m.g2 - e2) <= 1e-2 * m0.magnitude);
      }
    }
  }
}

TEST_CASE("image orbit mapping inverts by rotating back") {
  const auto data = gen_synthetic_images(24, 1);
  const auto om = image_orbit_mapping(InterpolationScheme::bilinear);
  const auto r = om.canonicalize(data.images[0]);
  const GrayImage back = om.apply_inverse(r.element, r.canonical);
  CHECK(disc_mean_abs_diff(back, data.images[0], 0.35) <= 2e-2);
}
