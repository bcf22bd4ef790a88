#include "orbit/vector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace orbit {

namespace {

void require_finite(const RealVector& x, const char* who) {
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": non-finite entry");
  }
}

}  // namespace

MeanSubtracted mean_subtract(const RealVector& x) {
  require_finite(x, "mean_subtract");
  if (x.empty()) return {{}, 0.0};
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  RealVector y(x.size());
  std::transform(x.begin(), x.end(), y.begin(), [mean](double v) { return v - mean; });
  return {std::move(y), mean};
}

double sort_energy(const RealVector& x) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e += std::abs(x[i]) / static_cast<double>(i + 1);
  return e;
}

CanonResult<RealVector, Permutation> sort_canonicalize(const RealVector& x) {
  require_finite(x, "sort_canonicalize");
  Permutation order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&x](std::size_t a, std::size_t b) {
    const double ma = std::abs(x[a]);
    const double mb = std::abs(x[b]);
    if (ma != mb) return ma > mb;
    if (x[a] != x[b]) return x[a] > x[b];
    return a < b;
  });
  CanonResult<RealVector, Permutation> r;
  r.canonical = permute(order, x);
  r.element = std::move(order);
  r.energy = sort_energy(r.canonical);
  // Equal magnitudes with different signs leave the energy argmax
  // ambiguous; the signed tie-break resolves it.
  for (std::size_t k = 1; k < r.canonical.size(); ++k) {
    if (std::abs(r.canonical[k]) == std::abs(r.canonical[k - 1]) && r.canonical[k] != r.canonical[k - 1]) {
      r.degenerate = true;
    }
  }
  return r;
}

OrbitMapping<RealVector, Permutation> sort_orbit_mapping() {
  return {[](const RealVector& x) { return sort_canonicalize(x); },
          [](const Permutation& p, const RealVector& y) { return unpermute(p, y); }};
}

OrbitMapping<RealVector, double> mean_orbit_mapping() {
  return {[](const RealVector& x) {
            auto m = mean_subtract(x);
            return CanonResult<RealVector, double>{std::move(m.centered), m.mean, false, 0.0};
          },
          [](const double& mean, const RealVector& y) {
            RealVector x(y.size());
            std::transform(y.begin(), y.end(), x.begin(), [mean](double v) { return v + mean; });
            return x;
          }};
}

}  // namespace orbit
