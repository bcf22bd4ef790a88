#pragma once

// Orbit mappings for 3D point clouds under translation, uniform scaling and
// proper rotation. Rows are points; a rotation R acts as X -> X R.

#include <array>
#include <cstddef>
#include <vector>

#include "orbit/group.hpp"

namespace orbit {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;  // row-major: m[row][col]

Mat3 identity3();
Mat3 multiply(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);
/// Rotation about the z axis (x -> y for positive angles).
Mat3 rotation_z(double angle);
/// Rotation about the x axis (y -> z for positive angles).
Mat3 rotation_x(double angle);

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool operator==(const PointCloud&) const = default;
};

/// Right-multiplies every row: p -> p M.
PointCloud transform_rows(const PointCloud& x, const Mat3& m);
/// Rotates every point by R: p -> R p (equivalently X R^T).
PointCloud rotate_points(const PointCloud& x, const Mat3& r);
PointCloud scale_points(const PointCloud& x, double c);
PointCloud translate_points(const PointCloud& x, const Vec3& t);

Vec3 centroid(const PointCloud& x);
double mean_norm(const PointCloud& x);

struct Centered {
  PointCloud cloud;
  Vec3 centroid;
};

Centered center_cloud(const PointCloud& x);

struct Normalized {
  PointCloud cloud;
  double scale;
};

/// Divides by the mean Euclidean norm of the points. Throws DegenerateInput
/// when that mean is zero.
Normalized normalize_scale(const PointCloud& x);

struct Eigen3 {
  Vec3 values;   // descending
  Mat3 vectors;  // column k is the eigenvector of values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition of a symmetric 3x3 matrix. Sweeps the
/// pairs (0,1), (0,2), (1,2) until the off-diagonal Frobenius norm drops
/// below 1e-12 of the matrix norm; results sorted by eigenvalue descending
/// (stable on ties). Throws std::invalid_argument if the input is not
/// symmetric to 1e-10 relative.
Eigen3 eig3_sym(const Mat3& c);

inline constexpr double kEigenTieThreshold = 1e-9;
inline constexpr double kSignThreshold = 1e-12;

/// Pose of a cloud relative to its canonical form:
///   canonical = ((X - centroid) / scale) * basis * diag(signs)
struct PCAFrame {
  Vec3 centroid{0.0, 0.0, 0.0};
  double scale = 1.0;
  Mat3 basis = identity3();
  Vec3 signs{1.0, 1.0, 1.0};
  Vec3 singular_values{0.0, 0.0, 0.0};
  bool degenerate = false;

  /// basis * diag(signs), a proper rotation.
  Mat3 rotation() const;
};

/// Applies the frame: ((X - centroid) / scale) * rotation().
PointCloud apply_frame(const PCAFrame& f, const PointCloud& x);
/// Inverse of apply_frame: Y * rotation()^T * scale + centroid.
PointCloud unapply_frame(const PCAFrame& f, const PointCloud& y);

struct CloudCanon {
  PointCloud cloud;
  PCAFrame frame;
};

/// Aligns principal axes of a centered cloud with the coordinate axes. The
/// sign of each axis follows the first point's coordinate along it (falling
/// back to the first point with a nonzero coordinate, flagged degenerate);
/// the sign of the smallest axis is flipped if needed so the overall map is
/// a proper rotation. Eigenvalue ties are flagged degenerate.
/// Throws std::invalid_argument for fewer than 3 points or an uncentered
/// cloud.
CloudCanon canonicalize_rotation(const PointCloud& x);

/// center -> normalize scale -> canonicalize rotation. Throws
/// DegenerateInput for a cloud whose points all coincide.
CloudCanon canonicalize_similarity(const PointCloud& x);

OrbitMapping<PointCloud, PCAFrame> cloud_orbit_mapping();

/// Largest absolute coordinate difference; clouds must have equal size.
double max_abs_diff(const PointCloud& a, const PointCloud& b);

}  // namespace orbit
