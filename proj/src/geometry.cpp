#include "twistspin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twistspin {

namespace {

template <int D>
double bbox_diagonal_impl(std::span<const Eigen::Matrix<double, D, 1>> points) {
  if (points.empty()) return 0.0;
  Eigen::Matrix<double, D, 1> lo = points.front();
  Eigen::Matrix<double, D, 1> hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

}  // namespace

double bbox_diagonal(std::span<const Vec3> points) { return bbox_diagonal_impl<3>(points); }
double bbox_diagonal(std::span<const Vec4> points) { return bbox_diagonal_impl<4>(points); }

namespace {

template <typename V>
double segment_distance_impl(const V& p0, const V& p1, const V& q0, const V& q1) {
  // Closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9).
  const V d1 = p1 - p0;
  const V d2 = q1 - q0;
  const V r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  constexpr double tiny = 1e-300;
  double s = 0.0;
  double t = 0.0;
  if (a <= tiny && e <= tiny) return r.norm();
  if (a <= tiny) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= tiny) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > tiny ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

}  // namespace

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  return segment_distance_impl(p0, p1, q0, q1);
}

double segment_distance(const Vec4& p0, const Vec4& p1, const Vec4& q0, const Vec4& q1) {
  return segment_distance_impl(p0, p1, q0, q1);
}

template <int D>
double point_triangle_distance(const Eigen::Matrix<double, D, 1>& p,
                               const Eigen::Matrix<double, D, 1>& a,
                               const Eigen::Matrix<double, D, 1>& b,
                               const Eigen::Matrix<double, D, 1>& c) {
  using V = Eigen::Matrix<double, D, 1>;
  const V e1 = b - a;
  const V e2 = c - a;
  const V w = p - a;
  Eigen::Matrix2d gram;
  gram << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Eigen::Vector2d rhs(e1.dot(w), e2.dot(w));
  const double det = gram.determinant();
  if (std::abs(det) > 1e-300) {
    const Eigen::Vector2d st = gram.inverse() * rhs;
    if (st[0] >= 0.0 && st[1] >= 0.0 && st[0] + st[1] <= 1.0) {
      return (w - st[0] * e1 - st[1] * e2).norm();
    }
  }
  auto seg = [&](const V& s0, const V& s1) {
    const V d = s1 - s0;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - s0).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (p - (s0 + t * d)).norm();
  };
  return std::min({seg(a, b), seg(b, c), seg(c, a)});
}

template double point_triangle_distance<3>(const Vec3&, const Vec3&, const Vec3&, const Vec3&);
template double point_triangle_distance<4>(const Vec4&, const Vec4&, const Vec4&, const Vec4&);

Vec3 rotate_about_axis(const Vec3& p, const Vec3& center, const Vec3& axis, double angle) {
  const Vec3 r = p - center;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec3 rotated = r * c + axis.cross(r) * s + axis * (axis.dot(r)) * (1.0 - c);
  return center + rotated;
}

Vec4 rotate_uv(const Vec4& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Vec4(p[0], p[1], c * p[2] - s * p[3], s * p[2] + c * p[3]);
}

bool segments_cross_2d(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                       double eps, double& s, double& t) {
  const Vec2 da = a1 - a0;
  const Vec2 db = b1 - b0;
  const double denom = cross2(da, db);
  if (std::abs(denom) <= 1e-300) return false;
  const Vec2 r = b0 - a0;
  s = cross2(r, db) / denom;
  t = cross2(r, da) / denom;
  return s > eps && s < 1.0 - eps && t > eps && t < 1.0 - eps;
}

Rng::Rng(std::uint64_t seed) : state_(seed) {}

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

int Rng::below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

Eigen::Matrix4d random_small_rotation(double magnitude, Rng& rng) {
  Eigen::Matrix4d r = Eigen::Matrix4d::Identity();
  const double bound = magnitude / std::sqrt(6.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double angle = rng.uniform(-bound, bound);
      Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
      g(i, i) = std::cos(angle);
      g(j, j) = std::cos(angle);
      g(i, j) = -std::sin(angle);
      g(j, i) = std::sin(angle);
      r = g * r;
    }
  }
  return r;
}

}  // namespace twistspin
