#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace twistspin {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

/// Vertex-index triple; orientation is the stored order.
using Tri = std::array<int, 3>;

/// Scale-relative tolerances. Absolute values are `value * scale` where scale is
/// the bounding-box diagonal of the object being processed.
struct Tolerances {
  double intersect = 1e-9;
  double stitch = 1e-7;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

double bbox_diagonal(std::span<const Vec3> points);
double bbox_diagonal(std::span<const Vec4> points);

/// Closest distance between the closed segments [p0,p1] and [q0,q1].
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);
double segment_distance(const Vec4& p0, const Vec4& p1, const Vec4& q0, const Vec4& q1);

/// Distance from a point to the closed triangle (a, b, c), any dimension.
template <int D>
double point_triangle_distance(const Eigen::Matrix<double, D, 1>& p,
                               const Eigen::Matrix<double, D, 1>& a,
                               const Eigen::Matrix<double, D, 1>& b,
                               const Eigen::Matrix<double, D, 1>& c);

/// Rodrigues rotation of p about the line through `center` with unit direction `axis`.
Vec3 rotate_about_axis(const Vec3& p, const Vec3& center, const Vec3& axis, double angle);

/// Rotation by `angle` in the (u, v) coordinate plane of R^4 (coordinates 2 and 3).
Vec4 rotate_uv(const Vec4& p, double angle);

/// Proper intersection of 2D segments; returns parameters (s, t) on each when the
/// crossing is strictly interior to both up to `eps` (relative parameter slack).
bool segments_cross_2d(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                       double eps, double& s, double& t);

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// splitmix64 with hand-written distributions, so streams are identical across
/// standard libraries (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  int below(int n);

 private:
  std::uint64_t state_;
};

/// 4x4 rotation built from Givens rotations in all six coordinate planes, each
/// by an angle drawn uniformly from [-magnitude/sqrt(6), magnitude/sqrt(6)].
Eigen::Matrix4d random_small_rotation(double magnitude, Rng& rng);

}  // namespace twistspin
