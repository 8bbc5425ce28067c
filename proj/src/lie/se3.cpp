#include "gvtraj/lie/se3.hpp"

#include <cmath>
#include <vector>

namespace gvtraj::lie {

namespace {

// Coefficient functions for the closed form of se3_Q written against the
// reduction hat(n)^3 = -hat(n):
//   Q = -1/2 R + A (PR + RP) + B (P^2 R + R P^2) + C (P R P)
//       + D (P R P^2 + P^2 R P) + E (P^2 R P^2),
// with P = hat(phi), R = hat(rho), a = |phi|. Each coefficient is an
// analytic function of a^2; below a = 1 the closed forms cancel badly, so
// evaluate their power series instead (terms fall off like a^2/(2m)!).
struct QCoeffs {
  double A, B, C, D, E;
};

QCoeffs q_coeffs(double a) {
  QCoeffs q;
  if (a < 1.0) {
    const double x = a * a;
    double fact[23];  // fact[k] = k!
    fact[0] = 1.0;
    for (int k = 1; k <= 22; ++k) fact[k] = fact[k - 1] * k;
    q.A = q.B = q.C = q.D = q.E = 0.0;
    double xm = 1.0;  // x^m
    for (int m = 0; m <= 8; ++m) {
      const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
      const double t = sgn * xm;
      q.A += t / fact[2 * m + 3];
      q.B -= t / fact[2 * m + 4];
      q.C -= (m + 1) * t / fact[2 * m + 4];
      q.D += (m + 1) * t / fact[2 * m + 5];
      q.E -= (m + 1) * t / fact[2 * m + 6];
      xm *= x;
    }
    return q;
  }
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double a4 = a3 * a;
  const double a5 = a4 * a;
  const double a6 = a5 * a;
  const double s = std::sin(a);
  const double c = std::cos(a);
  q.A = (a - s) / a3;
  q.B = (1.0 - 0.5 * a2 - c) / a4;
  q.C = -0.5 * q.A - q.B;
  q.D = -0.5 * q.B - 1.5 * (s - a + a3 / 6.0) / a5;
  q.E = -0.5 * (s - a + a3 / 6.0) / a5 +
        2.0 * (1.0 - 0.5 * a2 + a4 / 24.0 - c) / a6;
  return q;
}

}  // namespace

Mat4 hat_se3(const Vec6& xi) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat(xi.tail<3>());
  m.topRightCorner<3, 1>() = -xi.head<3>();
  return m;
}

Mat6 curly_se3(const Vec6& xi) {
  Mat6 m = Mat6::Zero();
  const Mat3 P = hat(xi.tail<3>());
  m.topLeftCorner<3, 3>() = P;
  m.topRightCorner<3, 3>() = hat(xi.head<3>());
  m.bottomRightCorner<3, 3>() = P;
  return m;
}

Pose exp_se3(const Vec6& xi) {
  const Vec3 rho = xi.head<3>();
  const Vec3 phi = xi.tail<3>();
  return Pose(exp_so3(phi), jac_so3(phi) * rho);
}

Vec6 log_se3(const Pose& T) {
  const Vec3 phi = log_so3(T.rotation());
  Vec6 xi;
  xi.tail<3>() = phi;
  xi.head<3>() = jac_inv_so3(phi) * T.translation();
  return xi;
}

Mat6 adjoint(const Pose& T) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = T.rotation();
  m.topRightCorner<3, 3>() = -hat(T.translation()) * T.rotation();
  m.bottomRightCorner<3, 3>() = T.rotation();
  return m;
}

Mat3 se3_Q(const Vec3& rho, const Vec3& phi) {
  const QCoeffs q = q_coeffs(phi.norm());
  const Mat3 P = hat(phi);
  const Mat3 R = hat(rho);
  const Mat3 PR = P * R;
  const Mat3 RP = R * P;
  const Mat3 PPR = P * PR;
  const Mat3 RPP = RP * P;
  const Mat3 PRP = PR * P;
  return -0.5 * R + q.A * (PR + RP) + q.B * (PPR + RPP) + q.C * PRP +
         q.D * (PRP * P + P * PRP) + q.E * (P * PRP * P);
}

Mat6 jac_se3(const Vec6& xi) {
  const Vec3 phi = xi.tail<3>();
  const Mat3 S = jac_so3(phi);
  Mat6 J = Mat6::Zero();
  J.topLeftCorner<3, 3>() = S;
  J.bottomRightCorner<3, 3>() = S;
  J.topRightCorner<3, 3>() = se3_Q(xi.head<3>(), phi);
  return J;
}

Mat6 jac_inv_se3(const Vec6& xi) {
  const Vec3 phi = xi.tail<3>();
  const Mat3 Sinv = jac_inv_so3(phi);
  Mat6 J = Mat6::Zero();
  J.topLeftCorner<3, 3>() = Sinv;
  J.bottomRightCorner<3, 3>() = Sinv;
  J.topRightCorner<3, 3>() = -Sinv * se3_Q(xi.head<3>(), phi) * Sinv;
  return J;
}

Mat6 jac_inv_se3_deriv(const Vec6& xi, const Vec6& w) {
  // jac_inv_se3(xi) = sum_n (-1)^n (B_n/n!) (curly(xi))^n; differentiate
  // term by term and fold the perturbation out with curly(u) v = -curly(v) u:
  //   D = sum_n (-1)^(n+1) (B_n/n!) sum_{j<n} X^j curly(X^{n-1-j} w),
  // X = curly_se3(xi). Converges for |phi| < 2*pi.
  const Mat6 X = curly_se3(xi);
  constexpr int kMaxN = 40;
  // powers X^j and vectors X^j w, j = 0 .. kMaxN-1
  std::vector<Mat6> Xp(kMaxN);
  std::vector<Vec6> u(kMaxN);
  Xp[0] = Mat6::Identity();
  u[0] = w;
  for (int j = 1; j < kMaxN; ++j) {
    Xp[j] = Xp[j - 1] * X;
    u[j] = X * u[j - 1];
  }
  Mat6 D = Mat6::Zero();
  for (int n = 1; n <= kMaxN; ++n) {
    const double bn = bernoulli_over_factorial(n);
    if (bn == 0.0) continue;  // odd n >= 3
    const double sgn = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
    Mat6 term = Mat6::Zero();
    for (int j = 0; j < n; ++j) term += Xp[j] * curly_se3(u[n - 1 - j]);
    D += sgn * bn * term;
    if (n > 6 && (bn * term).lpNorm<Eigen::Infinity>() <
                     1e-18 * (1.0 + D.lpNorm<Eigen::Infinity>())) {
      break;
    }
  }
  return D;
}

}  // namespace gvtraj::lie
