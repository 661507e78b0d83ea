#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <cmath>

namespace virtimu {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// World frame is Y-up, meters. Gravity points along -Y.
inline constexpr double kGravity = 9.80665;  // m/s^2
inline const Vec3 kGravityWorld(0.0, -kGravity, 0.0);

/// Unit quaternion, Hamilton convention, scalar first (w, x, y, z).
/// Rotations compose left-to-right as q_total = q_outer * q_inner and act on
/// vectors as v' = q v q^-1.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }
  /// Inverse of a unit quaternion.
  Quat inverse() const { return conjugate(); }

  Quat negated() const { return {-w, -x, -y, -z}; }

  double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }

  Vec3 vec() const { return Vec3(x, y, z); }
};

/// Hamilton product, renormalized so unit inputs stay unit.
inline Quat quat_multiply(const Quat& a, const Quat& b) {
  Quat r{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
         a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
         a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
         a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  return r.normalized();
}

/// Raw Hamilton product without renormalization (for derivative quaternions,
/// which are not unit).
inline Quat quat_multiply_raw(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

/// Rotates v by unit quaternion q. Norm-preserving to 1e-9 for unit q.
inline Vec3 quat_rotate(const Quat& q, const Vec3& v) {
  // v' = v + 2 u x (u x v + w v), u = (x, y, z)
  Vec3 u(q.x, q.y, q.z);
  Vec3 t = 2.0 * u.cross(v);
  return v + q.w * t + u.cross(t);
}

inline Quat quat_from_axis_angle(const Vec3& axis, double angle) {
  Vec3 a = axis.normalized();
  double h = 0.5 * angle;
  double s = std::sin(h);
  return {std::cos(h), a.x() * s, a.y() * s, a.z() * s};
}

inline Mat3 quat_to_matrix(const Quat& q) {
  Mat3 m;
  double ww = q.w * q.w, xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
  double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
  double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
  m << ww + xx - yy - zz, 2.0 * (xy - wz), 2.0 * (xz + wy),
       2.0 * (xy + wz), ww - xx + yy - zz, 2.0 * (yz - wx),
       2.0 * (xz - wy), 2.0 * (yz + wx), ww - xx - yy + zz;
  return m;
}

/// Shepperd's method; returns the representative with w >= 0.
inline Quat quat_from_matrix(const Mat3& m) {
  Quat q;
  double trace = m(0, 0) + m(1, 1) + m(2, 2);
  if (trace > 0.0) {
    double s = std::sqrt(trace + 1.0) * 2.0;
    q.w = 0.25 * s;
    q.x = (m(2, 1) - m(1, 2)) / s;
    q.y = (m(0, 2) - m(2, 0)) / s;
    q.z = (m(1, 0) - m(0, 1)) / s;
  } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
    double s = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2)) * 2.0;
    q.w = (m(2, 1) - m(1, 2)) / s;
    q.x = 0.25 * s;
    q.y = (m(0, 1) + m(1, 0)) / s;
    q.z = (m(0, 2) + m(2, 0)) / s;
  } else if (m(1, 1) > m(2, 2)) {
    double s = std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2)) * 2.0;
    q.w = (m(0, 2) - m(2, 0)) / s;
    q.x = (m(0, 1) + m(1, 0)) / s;
    q.y = 0.25 * s;
    q.z = (m(1, 2) + m(2, 1)) / s;
  } else {
    double s = std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1)) * 2.0;
    q.w = (m(1, 0) - m(0, 1)) / s;
    q.x = (m(0, 2) + m(2, 0)) / s;
    q.y = (m(1, 2) + m(2, 1)) / s;
    q.z = 0.25 * s;
  }
  if (q.w < 0.0) q = q.negated();
  return q.normalized();
}

/// Minimal-angle rotation taking from/|from| onto to/|to|. Antiparallel
/// inputs map to a 180 degree turn about a deterministic perpendicular axis
/// (the unit X axis projected off `from`, or unit Y when `from` is X-aligned).
inline Quat shortest_arc(const Vec3& from, const Vec3& to) {
  Vec3 f = from.normalized();
  Vec3 t = to.normalized();
  double c = f.dot(t);
  if (c < -1.0 + 1e-12) {
    Vec3 axis = Vec3::UnitX() - f.x() * f;
    if (axis.squaredNorm() < 1e-12) axis = Vec3::UnitY() - f.y() * f;
    return quat_from_axis_angle(axis, M_PI);
  }
  Vec3 cr = f.cross(t);
  double s = std::sqrt(2.0 * (1.0 + c));
  Quat q{0.5 * s, cr.x() / s, cr.y() / s, cr.z() / s};
  return q.normalized();
}

/// Shortest-path spherical interpolation between unit quaternions, u in [0,1].
inline Quat slerp(const Quat& a, const Quat& b_in, double u) {
  Quat b = b_in;
  double d = a.dot(b);
  if (d < 0.0) {
    b = b.negated();
    d = -d;
  }
  if (d > 1.0 - 1e-12) {
    // Nearly identical: interpolate linearly and renormalize.
    Quat r{a.w + u * (b.w - a.w), a.x + u * (b.x - a.x), a.y + u * (b.y - a.y),
           a.z + u * (b.z - a.z)};
    return r.normalized();
  }
  double theta = std::acos(d);
  double s = std::sin(theta);
  double ka = std::sin((1.0 - u) * theta) / s;
  double kb = std::sin(u * theta) / s;
  Quat r{ka * a.w + kb * b.w, ka * a.x + kb * b.x, ka * a.y + kb * b.y, ka * a.z + kb * b.z};
  return r.normalized();
}

}  // namespace virtimu
