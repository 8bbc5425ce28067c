#include "gvtraj/lie/so3.hpp"

#include <array>
#include <cmath>

#include "gvtraj/core/error.hpp"

namespace gvtraj::lie {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// vee() of the antisymmetric part convention matching hat() below.
Vec3 vee(const Mat3& A) { return Vec3(A(2, 1), A(0, 2), A(1, 0)); }

}  // namespace

Mat3 hat(const Vec3& u) {
  Mat3 m;
  m << 0.0, -u.z(), u.y(),  //
      u.z(), 0.0, -u.x(),   //
      -u.y(), u.x(), 0.0;
  return m;
}

Mat3 exp_so3(const Vec3& phi) {
  const double a = phi.norm();
  if (a < kSmallAngle) {
    // expm(-P) to 4th order, P = hat(phi)
    const Mat3 P = hat(phi);
    const Mat3 P2 = P * P;
    return Mat3::Identity() - P + 0.5 * P2 - (1.0 / 6.0) * P2 * P +
           (1.0 / 24.0) * P2 * P2;
  }
  const Vec3 n = phi / a;
  const double c = std::cos(a);
  const double s = std::sin(a);
  return c * Mat3::Identity() + (1.0 - c) * (n * n.transpose()) - s * hat(n);
}

Vec3 log_so3(const Mat3& C) {
  if (C.trace() <= -1.0 + 1e-6) {
    throw AngleNearPi("log_so3: rotation angle too close to pi (trace = " +
                      std::to_string(C.trace()) + ")");
  }
  // sin(a) * n sits in the antisymmetric part; cos(a) in the trace.
  const Vec3 sv = 0.5 * vee(C.transpose() - C);
  const double s = sv.norm();
  const double c = 0.5 * (C.trace() - 1.0);
  const double a = std::atan2(s, c);
  if (a < kSmallAngle) {
    // a/sin(a) ~ 1 + a^2/6
    return sv * (1.0 + a * a / 6.0);
  }
  return sv * (a / s);
}

Mat3 jac_so3(const Vec3& phi) {
  const double a = phi.norm();
  if (a < kSmallAngle) {
    // sum_n (-P)^n / (n+1)!
    const Mat3 P = hat(phi);
    const Mat3 P2 = P * P;
    return Mat3::Identity() - 0.5 * P + (1.0 / 6.0) * P2 -
           (1.0 / 24.0) * P2 * P + (1.0 / 120.0) * P2 * P2;
  }
  const Vec3 n = phi / a;
  const double sa = std::sin(a) / a;
  return sa * Mat3::Identity() + (1.0 - sa) * (n * n.transpose()) -
         ((1.0 - std::cos(a)) / a) * hat(n);
}

Mat3 jac_inv_so3(const Vec3& phi) {
  const double a = phi.norm();
  const double m = std::round(a / kTwoPi);
  if (m >= 1.0 && std::abs(a - m * kTwoPi) < 1e-3) {
    throw SingularJacobian("jac_inv_so3: |phi| = " + std::to_string(a) +
                           " is within 1e-3 of " + std::to_string(m) +
                           " * 2*pi");
  }
  if (a < kSmallAngle) {
    const Mat3 P = hat(phi);
    const Mat3 P2 = P * P;
    // Bernoulli series: I + P/2 + P^2/12 - P^4/720 (odd terms >1 vanish)
    return Mat3::Identity() + 0.5 * P + (1.0 / 12.0) * P2 -
           (1.0 / 720.0) * P2 * P2;
  }
  const Vec3 n = phi / a;
  const double half = 0.5 * a;
  const double cot = half * std::cos(half) / std::sin(half);
  return cot * Mat3::Identity() + (1.0 - cot) * (n * n.transpose()) +
         half * hat(n);
}

double bernoulli_over_factorial(int n) {
  constexpr int kMax = 40;
  static const std::array<double, kMax + 1> table = [] {
    std::array<double, kMax + 2> fact{};  // fact[k] = k!
    fact[0] = 1.0;
    for (int k = 1; k <= kMax + 1; ++k) fact[k] = fact[k - 1] * k;
    std::array<double, kMax + 1> b{};
    b[0] = 1.0;
    // from sum_{j=0}^{n} B_j / (j! (n+1-j)!) = 0, n >= 1
    for (int k = 1; k <= kMax; ++k) {
      if (k >= 3 && k % 2 == 1) {
        b[k] = 0.0;  // odd Bernoulli numbers vanish; avoid rounding residue
        continue;
      }
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += b[j] / fact[k + 1 - j];
      b[k] = -acc;
    }
    return b;
  }();
  return table.at(static_cast<size_t>(n));
}

}  // namespace gvtraj::lie
