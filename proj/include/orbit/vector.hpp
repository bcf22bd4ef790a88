#pragma once

// Orbit mappings on plain real vectors: shifts by a multiple of the all-ones
// vector (mean subtraction) and permutations (magnitude sorting).

#include "orbit/group.hpp"

namespace orbit {

struct MeanSubtracted {
  RealVector centered;
  double mean;
};

MeanSubtracted mean_subtract(const RealVector& x);

/// sum_i |x_i| / i with i starting at 1.
double sort_energy(const RealVector& x);

/// The permutation of x that maximizes sort_energy: entries by descending
/// magnitude, ties broken by signed value descending, then by original index.
/// element[k] is the input index placed at position k.
CanonResult<RealVector, Permutation> sort_canonicalize(const RealVector& x);

OrbitMapping<RealVector, Permutation> sort_orbit_mapping();
/// Shift group; the element is the removed mean.
OrbitMapping<RealVector, double> mean_orbit_mapping();

}  // namespace orbit
