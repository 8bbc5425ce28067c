#pragma once

#include <Eigen/Core>

namespace gvtraj::lie {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Skew-symmetric (cross-product) matrix: hat(u) * v == u x v.
Mat3 hat(const Vec3& phi);

// Rotation from an axis-angle vector. Convention used throughout this
// project: exp_so3(phi) == expm(-hat(phi)), i.e.
//   C = cos(a) I + (1 - cos(a)) n n^T - sin(a) hat(n),  a = |phi|, n = phi/a.
// Falls back to a 4th-order series for |phi| below the small-angle switch.
Mat3 exp_so3(const Vec3& phi);

// Inverse of exp_so3. Requires the rotation angle to be away from pi;
// throws AngleNearPi when trace(C) <= -1 + 1e-6.
Vec3 log_so3(const Mat3& C);

// Left Jacobian of exp_so3: S(phi) = integral_0^1 exp_so3(alpha*phi) dalpha.
//   S = (sin a / a) I + (1 - sin a / a) n n^T - ((1 - cos a)/a) hat(n).
Mat3 jac_so3(const Vec3& phi);

// Inverse left Jacobian,
//   S^-1 = (a/2) cot(a/2) I + (1 - (a/2) cot(a/2)) n n^T + (a/2) hat(n).
// Throws SingularJacobian when |phi| is within 1e-3 of a nonzero multiple
// of 2*pi (where S is singular).
Mat3 jac_inv_so3(const Vec3& phi);

// Rotation angles at or below this use truncated series instead of the
// closed forms above (which divide by the angle).
inline constexpr double kSmallAngle = 1e-6;

// B_n / n! where B_n are the Bernoulli numbers (B_1 = -1/2); valid for
// 0 <= n <= 40. These drive the series form of the inverse Jacobians.
double bernoulli_over_factorial(int n);

}  // namespace gvtraj::lie
