#include "orbit/group.hpp"

#include <algorithm>
#include <numeric>

namespace orbit {

Grid::Grid(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {
  if (values.size() != rows * cols) {
    throw std::invalid_argument("Grid: value count does not match dimensions");
  }
}

Grid quarter_turn(const Grid& g, int k) {
  if (g.rows != g.cols) throw std::invalid_argument("quarter_turn: grid must be square");
  const std::size_t n = g.rows;
  k = ((k % 4) + 4) % 4;
  Grid out = g;
  for (int step = 0; step < k; ++step) {
    Grid next(n, n);
    // Counter-clockwise: out(i, j) = src(n - 1 - j, i).
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) next.at(i, j) = out.at(n - 1 - j, i);
    }
    out = std::move(next);
  }
  return out;
}

Grid cross_correlate3(const Grid& g, const std::array<double, 9>& kernel) {
  Grid out(g.rows, g.cols);
  const auto rows = static_cast<long>(g.rows);
  const auto cols = static_cast<long>(g.cols);
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (long di = -1; di <= 1; ++di) {
        for (long dj = -1; dj <= 1; ++dj) {
          const long si = i + di;
          const long sj = j + dj;
          if (si < 0 || sj < 0 || si >= rows || sj >= cols) continue;
          acc += kernel[static_cast<std::size_t>((di + 1) * 3 + (dj + 1))] *
                 g.at(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
        }
      }
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
    }
  }
  return out;
}

RealVector permute(const Permutation& p, const RealVector& x) {
  if (p.size() != x.size()) throw std::invalid_argument("permute: size mismatch");
  RealVector y(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) y[i] = x[p[i]];
  return y;
}

RealVector unpermute(const Permutation& p, const RealVector& x) {
  if (p.size() != x.size()) throw std::invalid_argument("unpermute: size mismatch");
  RealVector y(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) y[p[i]] = x[i];
  return y;
}

Permutation inverse_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return inv;
}

Permutation compose_permutations(const Permutation& a, const Permutation& b) {
  // permute(a, permute(b, x))[i] = x[b[a[i]]]
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
  return c;
}

bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

namespace {

std::vector<double> sorted_componentwise_sum(const std::vector<const std::vector<double>*>& terms) {
  if (terms.empty()) throw std::invalid_argument("sum_terms: empty term set");
  const std::size_t n = terms.front()->size();
  std::vector<double> out(n);
  std::vector<double> column(terms.size());
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (terms[t]->size() != n) throw std::invalid_argument("sum_terms: inconsistent term sizes");
      column[t] = (*terms[t])[c];
    }
    std::sort(column.begin(), column.end());
    out[c] = std::accumulate(column.begin(), column.end(), 0.0);
  }
  return out;
}

}  // namespace

Grid sum_terms(const std::vector<Grid>& terms) {
  std::vector<const std::vector<double>*> ptrs;
  for (const auto& t : terms) {
    if (!terms.empty() && (t.rows != terms.front().rows || t.cols != terms.front().cols)) {
      throw std::invalid_argument("sum_terms: inconsistent grid shapes");
    }
    ptrs.push_back(&t.values);
  }
  auto values = sorted_componentwise_sum(ptrs);
  return Grid(terms.front().rows, terms.front().cols, std::move(values));
}

RealVector sum_terms(const std::vector<RealVector>& terms) {
  std::vector<const std::vector<double>*> ptrs;
  for (const auto& t : terms) ptrs.push_back(&t);
  return sorted_componentwise_sum(ptrs);
}

FiniteGroup<Grid, int> cyclic4_group() {
  return {{0, 1, 2, 3},
          [](const int& k, const Grid& g) { return quarter_turn(g, k); },
          [](const int& k) { return (4 - k) % 4; },
          [](const int& a, const int& b) { return (a + b) % 4; },
          0};
}

FiniteGroup<RealVector, Permutation> symmetric_group(std::size_t n) {
  if (n == 0 || n > 8) throw std::invalid_argument("symmetric_group: n must be in 1..8");
  FiniteGroup<RealVector, Permutation> group;
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  group.identity = p;
  do {
    group.elements.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  group.apply = [](const Permutation& q, const RealVector& x) { return permute(q, x); };
  group.inverse = [](const Permutation& q) { return inverse_permutation(q); };
  group.compose = [](const Permutation& a, const Permutation& b) { return compose_permutations(a, b); };
  return group;
}

}  // namespace orbit
