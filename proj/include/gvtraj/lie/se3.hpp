#pragma once

#include <Eigen/Core>

#include "gvtraj/lie/so3.hpp"

namespace gvtraj {

namespace lie {
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat4 = Eigen::Matrix4d;
}  // namespace lie

// Rigid transform stored as rotation + translation,
//   T = [ C  r ]
//       [ 0  1 ].
// Kept as a class (not a raw 4x4) so composition/inverse stay exact on the
// rotation block.
class Pose {
 public:
  Pose() : C_(lie::Mat3::Identity()), r_(lie::Vec3::Zero()) {}
  Pose(const lie::Mat3& C, const lie::Vec3& r) : C_(C), r_(r) {}
  explicit Pose(const lie::Mat4& M)
      : C_(M.topLeftCorner<3, 3>()), r_(M.topRightCorner<3, 1>()) {}

  static Pose Identity() { return Pose(); }

  const lie::Mat3& rotation() const { return C_; }
  const lie::Vec3& translation() const { return r_; }

  lie::Mat4 matrix() const {
    lie::Mat4 M = lie::Mat4::Identity();
    M.topLeftCorner<3, 3>() = C_;
    M.topRightCorner<3, 1>() = r_;
    return M;
  }

  Pose inverse() const { return Pose(C_.transpose(), -(C_.transpose() * r_)); }

  Pose operator*(const Pose& o) const {
    return Pose(C_ * o.C_, C_ * o.r_ + r_);
  }

 private:
  lie::Mat3 C_;
  lie::Vec3 r_;
};

namespace lie {

// Twists are ordered (rho; phi): translational part first, rotational last.

// 4x4 generator; exp_se3(xi) == expm(-hat_se3(xi)).
Mat4 hat_se3(const Vec6& xi);

// 6x6 adjoint-algebra generator ("curly hat");
// adjoint(exp_se3(xi)) == expm(-curly_se3(xi)).
Mat6 curly_se3(const Vec6& xi);

// Exponential: C = exp_so3(phi), r = jac_so3(phi) * rho.
Pose exp_se3(const Vec6& xi);

// Inverse of exp_se3 (throws AngleNearPi via log_so3 when applicable).
Vec6 log_se3(const Pose& T);

// Adjoint of a transform: maps twists across a frame change so that
//   exp_se3(adjoint(T) * w) == T * exp_se3(w) * T^-1.
Mat6 adjoint(const Pose& T);

// Left Jacobian of exp_se3:
//   J = [ S  Q ]
//       [ 0  S ],  S = jac_so3(phi), Q = se3_Q(rho, phi).
// Satisfies exp_se3(xi + w) ~= exp_se3(jac_se3(xi) * w) * exp_se3(xi)
// to first order in w.
Mat6 jac_se3(const Vec6& xi);

// Inverse left Jacobian, [ S^-1  -S^-1 Q S^-1 ; 0  S^-1 ].
// Throws SingularJacobian near |phi| = 2*pi (via jac_inv_so3).
Mat6 jac_inv_se3(const Vec6& xi);

// Coupling block of jac_se3 (closed form with series fallback).
Mat3 se3_Q(const Vec3& rho, const Vec3& phi);

// Directional-derivative matrix D(xi, w) with
//   D * delta == d/dt|_0 [ jac_inv_se3(xi + t*delta) * w ].
// Exact (to machine precision) via the Bernoulli series of jac_inv_se3;
// requires |phi| < 2*pi for convergence.
Mat6 jac_inv_se3_deriv(const Vec6& xi, const Vec6& w);

}  // namespace lie
}  // namespace gvtraj
