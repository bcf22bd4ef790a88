#pragma once

// Group actions, orbit mappings and the wrappers that turn an arbitrary
// predictor into an invariant or equivariant one.
//
//   invariant_wrap       predictor(canonical(x))
//   equivariant_average  sum over g of g(inner(g^-1(x)))     (finite groups)
//   equivariant_canon    g^-1(inner(g(x))), g the canonicalizing element

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orbit {

/// Row-major real raster. Row 0 is the bottom row, column 0 the left
/// column, so index (i, j) sits at height (i + 0.5) / rows.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
  Grid(std::size_t r, std::size_t c, std::vector<double> v);

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  bool operator==(const Grid&) const = default;
};

/// Exact counter-clockwise rotation of a square grid by k quarter turns
/// (pure index permutation).
Grid quarter_turn(const Grid& g, int k);

/// 3x3 cross-correlation with zero padding; used as a fixed linear inner map
/// in the equivariance tests and self-checks.
Grid cross_correlate3(const Grid& g, const std::array<double, 9>& kernel);

using RealVector = std::vector<double>;

/// Permutation p acting by (p . x)[i] = x[p[i]].
using Permutation = std::vector<std::size_t>;

RealVector permute(const Permutation& p, const RealVector& x);
/// Inverse action: y with y[p[i]] = x[i].
RealVector unpermute(const Permutation& p, const RealVector& x);
Permutation inverse_permutation(const Permutation& p);
/// compose(a, b) acts like "apply b, then a".
Permutation compose_permutations(const Permutation& a, const Permutation& b);
bool is_permutation(const Permutation& p);

/// Canonical element chosen from an orbit together with the group element
/// that produced it: canonical == apply(element, input).
template <class Datum, class Element>
struct CanonResult {
  Datum canonical;
  Element element;
  bool degenerate = false;
  double energy = 0.0;
};

/// A group given by an explicit list of elements and an action on Datum.
template <class Datum, class Element>
struct FiniteGroup {
  std::vector<Element> elements;
  std::function<Datum(const Element&, const Datum&)> apply;
  std::function<Element(const Element&)> inverse;
  std::function<Element(const Element&, const Element&)> compose;
  Element identity;
};

/// Verifies the action axioms on the given data: identity acts trivially,
/// apply(compose(g, h), x) == apply(g, apply(h, x)), and every listed
/// element has its inverse listed with compose(g, inverse(g)) == identity.
/// Equality is exact. Returns a description of the first violation.
template <class Datum, class Element>
std::optional<std::string> check_group_axioms(const FiniteGroup<Datum, Element>& group,
                                              const std::vector<Datum>& samples) {
  auto listed = [&](const Element& e) {
    for (const auto& g : group.elements) {
      if (g == e) return true;
    }
    return false;
  };
  if (!listed(group.identity)) return "identity is not listed";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (!(group.apply(group.identity, samples[s]) == samples[s])) {
      return "identity does not fix sample " + std::to_string(s);
    }
  }
  for (std::size_t a = 0; a < group.elements.size(); ++a) {
    const Element& g = group.elements[a];
    const Element inv = group.inverse(g);
    if (!listed(inv)) return "inverse of element " + std::to_string(a) + " is not listed";
    if (!(group.compose(g, inv) == group.identity)) {
      return "element " + std::to_string(a) + " composed with its inverse is not the identity";
    }
    for (std::size_t b = 0; b < group.elements.size(); ++b) {
      const Element& h = group.elements[b];
      const Element gh = group.compose(g, h);
      if (!listed(gh)) return "group is not closed under composition";
      for (std::size_t s = 0; s < samples.size(); ++s) {
        if (!(group.apply(gh, samples[s]) == group.apply(g, group.apply(h, samples[s])))) {
          return "compatibility fails for elements " + std::to_string(a) + ", " + std::to_string(b);
        }
      }
    }
  }
  return std::nullopt;
}

/// Orbit mapping: picks one element of the orbit of x and reports which
/// group element realizes it, together with how to undo that element.
template <class Datum, class Element>
struct OrbitMapping {
  std::function<CanonResult<Datum, Element>(const Datum&)> canonicalize;
  std::function<Datum(const Element&, const Datum&)> apply_inverse;
};

template <class T>
struct Flagged {
  T value;
  bool degenerate = false;
};

/// predictor o canonicalizer. A degenerate canonicalization still yields a
/// prediction; the flag is passed through.
template <class Datum, class Element, class Predictor>
auto invariant_wrap(OrbitMapping<Datum, Element> mapping, Predictor predictor) {
  return [mapping = std::move(mapping), predictor = std::move(predictor)](const Datum& x) {
    auto canon = mapping.canonicalize(x);
    using Out = std::decay_t<decltype(predictor(canon.canonical))>;
    return Flagged<Out>{predictor(canon.canonical), canon.degenerate};
  };
}

// Per-component sum of the orbit terms. Each component is summed in sorted
// order, so the result depends only on the multiset of terms and not on the
// order in which the group enumerates its elements.
Grid sum_terms(const std::vector<Grid>& terms);
RealVector sum_terms(const std::vector<RealVector>& terms);

/// Sum over g in the group of g(inner(g^-1(x))). Throws std::invalid_argument
/// if the group fails the axiom check on x.
template <class Datum, class Element, class Inner>
Datum equivariant_average(const Datum& x, const FiniteGroup<Datum, Element>& group, Inner&& inner) {
  if (auto bad = check_group_axioms(group, std::vector<Datum>{x})) {
    throw std::invalid_argument("equivariant_average: " + *bad);
  }
  std::vector<Datum> terms;
  terms.reserve(group.elements.size());
  for (const auto& g : group.elements) {
    terms.push_back(group.apply(g, inner(group.apply(group.inverse(g), x))));
  }
  return sum_terms(terms);
}

/// g^-1(inner(g(x))) where g(x) is the canonical element of the orbit of x.
template <class Datum, class Element, class Inner>
Flagged<Datum> equivariant_canon(const Datum& x, const OrbitMapping<Datum, Element>& mapping,
                                 Inner&& inner) {
  auto canon = mapping.canonicalize(x);
  return {mapping.apply_inverse(canon.element, inner(canon.canonical)), canon.degenerate};
}

/// Rotations of square grids by multiples of 90 degrees; elements are 0..3.
FiniteGroup<Grid, int> cyclic4_group();

/// All n! permutations of length-n vectors, lexicographic order.
FiniteGroup<RealVector, Permutation> symmetric_group(std::size_t n);

template <class Datum>
FiniteGroup<Datum, int> trivial_group() {
  return {{0},
          [](const int&, const Datum& x) { return x; },
          [](const int&) { return 0; },
          [](const int&, const int&) { return 0; },
          0};
}

}  // namespace orbit
