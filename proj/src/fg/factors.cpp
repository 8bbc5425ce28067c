#include "gvtraj/fg/factors.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "gvtraj/core/error.hpp"

namespace gvtraj::fg {

namespace {

using lie::Mat6;
using lie::Vec6;

Mat6 spd_inverse(const Mat6& M, const char* what) {
  Eigen::LLT<Mat6> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite(std::string(what) + ": matrix is not SPD");
  }
  return llt.solve(Mat6::Identity());
}

double spd_logdet(const Mat6& M, const char* what) {
  Eigen::LLT<Mat6> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite(std::string(what) + ": matrix is not SPD");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

void check_dt(double dt) {
  if (!(dt > 0.0)) {
    throw NonPositiveDt("motion prior interval must have dt > 0, got " +
                        std::to_string(dt));
  }
}

}  // namespace

Vec6 pose_meas_error(const StateKnot& knot, const Pose& meas) {
  return lie::log_se3(knot.T * meas.inverse());
}

Vec6 relative_pose_error(const StateKnot& from, const StateKnot& to,
                         const Pose& rel) {
  return lie::log_se3(to.T * from.T.inverse() * rel.inverse());
}

Vec12 wnoa_error(const StateKnot& prev, const StateKnot& next) {
  const double dt = next.t - prev.t;
  check_dt(dt);
  const Vec6 pi = lie::log_se3(next.T * prev.T.inverse());
  Vec12 e;
  e.head<6>() = pi - dt * prev.varpi;
  e.tail<6>() = lie::jac_inv_se3(pi) * next.varpi - prev.varpi;
  return e;
}

Mat12 wnoa_Qk(double dt, const Mat6& Qc) {
  check_dt(dt);
  Mat12 Q;
  Q.topLeftCorner<6, 6>() = (dt * dt * dt / 3.0) * Qc;
  Q.topRightCorner<6, 6>() = (dt * dt / 2.0) * Qc;
  Q.bottomLeftCorner<6, 6>() = Q.topRightCorner<6, 6>();
  Q.bottomRightCorner<6, 6>() = dt * Qc;
  return Q;
}

Mat12 wnoa_Qk_inv(double dt, const Mat6& Qc) {
  check_dt(dt);
  const Mat6 Qci = spd_inverse(Qc, "wnoa_Qk_inv(Qc)");
  Mat12 Qi;
  Qi.topLeftCorner<6, 6>() = (12.0 / (dt * dt * dt)) * Qci;
  Qi.topRightCorner<6, 6>() = (-6.0 / (dt * dt)) * Qci;
  Qi.bottomLeftCorner<6, 6>() = Qi.topRightCorner<6, 6>();
  Qi.bottomRightCorner<6, 6>() = (4.0 / dt) * Qci;
  return Qi;
}

double iw_factor_value(const Mat6& upsilon, const Mat6& psi, double nu) {
  constexpr int d = NoiseParameters::kDim;
  if (!(nu > d - 1)) {
    throw Error("iw_factor_value: need nu > dim - 1 = " +
                std::to_string(d - 1) + ", got " + std::to_string(nu));
  }
  const double alpha = nu + d + 2.0;
  const Mat6 ups_inv = spd_inverse(upsilon, "iw_factor_value(upsilon)");
  const double logdet_ups_inv = -spd_logdet(upsilon, "iw_factor_value");
  const double logdet_psi = spd_logdet(psi, "iw_factor_value(psi)");
  return -0.5 * (alpha - 1.0) * logdet_ups_inv - 0.5 * nu * logdet_psi +
         0.5 * (psi * ups_inv).trace();
}

double factor_dt(const Problem& problem, const FactorSpec& factor) {
  if (factor.kind != FactorKind::WnoaPrior) return 0.0;
  return problem.knots.at(factor.knot_b).t - problem.knots.at(factor.knot_a).t;
}

FactorEval evaluate_factor(const Problem& problem, const FactorSpec& factor,
                           bool with_jacobians) {
  const int dim = problem.local_dim();
  FactorEval out;
  switch (factor.kind) {
    case FactorKind::WnoaPrior: {
      if (problem.pose_only) {
        throw Error("motion-prior factor needs velocity states");
      }
      const StateKnot& prev = problem.knots.at(factor.knot_a);
      const StateKnot& next = problem.knots.at(factor.knot_b);
      const double dt = next.t - prev.t;
      check_dt(dt);
      const Vec6 pi = lie::log_se3(next.T * prev.T.inverse());
      const Mat6 Ji_pi = lie::jac_inv_se3(pi);
      Vec12 e;
      e.head<6>() = pi - dt * prev.varpi;
      e.tail<6>() = Ji_pi * next.varpi - prev.varpi;
      out.e = e;
      out.knots = {factor.knot_a, factor.knot_b};
      if (with_jacobians) {
        // d pi / d dxi_prev = -jac_inv(-pi); d pi / d dxi_next = jac_inv(pi)
        const Mat6 Ji_neg = lie::jac_inv_se3(-pi);
        const Mat6 D = lie::jac_inv_se3_deriv(pi, next.varpi);
        Eigen::MatrixXd Jp = Eigen::MatrixXd::Zero(12, 12);
        Jp.topLeftCorner<6, 6>() = -Ji_neg;
        Jp.topRightCorner<6, 6>() = -dt * Mat6::Identity();
        Jp.bottomLeftCorner<6, 6>() = -D * Ji_neg;
        Jp.bottomRightCorner<6, 6>() = -Mat6::Identity();
        Eigen::MatrixXd Jn = Eigen::MatrixXd::Zero(12, 12);
        Jn.topLeftCorner<6, 6>() = Ji_pi;
        Jn.bottomLeftCorner<6, 6>() = D * Ji_pi;
        Jn.bottomRightCorner<6, 6>() = Ji_pi;
        out.J = {std::move(Jp), std::move(Jn)};
      }
      return out;
    }
    case FactorKind::PoseMeasurement:
    case FactorKind::GroundtruthPose: {
      const StateKnot& knot = problem.knots.at(factor.knot_a);
      const Vec6 e = pose_meas_error(knot, factor.meas);
      out.e = e;
      out.knots = {factor.knot_a};
      if (with_jacobians) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, dim);
        J.leftCols<6>() = lie::jac_inv_se3(e);
        out.J = {std::move(J)};
      }
      return out;
    }
    case FactorKind::LoopClosureRelative: {
      const StateKnot& from = problem.knots.at(factor.knot_a);
      const StateKnot& to = problem.knots.at(factor.knot_b);
      const Vec6 e = relative_pose_error(from, to, factor.meas);
      out.e = e;
      out.knots = {factor.knot_a, factor.knot_b};
      if (with_jacobians) {
        Eigen::MatrixXd Jf = Eigen::MatrixXd::Zero(6, dim);
        Jf.leftCols<6>() = -lie::jac_inv_se3(-e) * lie::adjoint(factor.meas);
        Eigen::MatrixXd Jt = Eigen::MatrixXd::Zero(6, dim);
        Jt.leftCols<6>() = lie::jac_inv_se3(e);
        out.J = {std::move(Jf), std::move(Jt)};
      }
      return out;
    }
  }
  throw Error("evaluate_factor: unknown factor kind");
}

namespace {

const Mat6& bound_static(const FactorSpec& factor,
                         const NoiseParameters& params) {
  switch (factor.noise) {
    case NoiseBinding::StaticMeasurement:
      if (!params.W) throw Error("factor bound to W but W is unset");
      return *params.W;
    case NoiseBinding::StaticGroundtruth:
      if (!params.W_gt) throw Error("factor bound to W_gt but W_gt is unset");
      return *params.W_gt;
    case NoiseBinding::PerFactorIW:
      if (factor.iw_index < 0 ||
          factor.iw_index >= static_cast<int>(params.upsilons.size())) {
        throw Error("factor iw_index out of range");
      }
      return params.upsilons[factor.iw_index];
    case NoiseBinding::MotionPrior:
      break;
  }
  throw Error("bound_static: motion prior has no single 6x6 covariance");
}

}  // namespace

Eigen::MatrixXd factor_cov(const FactorSpec& factor,
                           const NoiseParameters& params, double dt) {
  if (factor.noise == NoiseBinding::MotionPrior) {
    return wnoa_Qk(dt, params.Qc);
  }
  return bound_static(factor, params);
}

Eigen::MatrixXd factor_cov_inv(const FactorSpec& factor,
                               const NoiseParameters& params, double dt) {
  if (factor.noise == NoiseBinding::MotionPrior) {
    return wnoa_Qk_inv(dt, params.Qc);
  }
  return spd_inverse(bound_static(factor, params), "factor_cov_inv");
}

double factor_cov_logdet(const FactorSpec& factor,
                         const NoiseParameters& params, double dt) {
  if (factor.noise == NoiseBinding::MotionPrior) {
    check_dt(dt);
    // det([[dt^3/3, dt^2/2],[dt^2/2, dt]] (x) Qc) = (dt^4/12)^6 |Qc|^2
    return 6.0 * std::log(dt * dt * dt * dt / 12.0) +
           2.0 * spd_logdet(params.Qc, "factor_cov_logdet(Qc)");
  }
  return spd_logdet(bound_static(factor, params), "factor_cov_logdet");
}

}  // namespace gvtraj::fg
