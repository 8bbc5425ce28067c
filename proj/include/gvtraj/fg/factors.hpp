#pragma once

#include <Eigen/Core>
#include <vector>

#include "gvtraj/fg/noise.hpp"
#include "gvtraj/fg/state.hpp"

namespace gvtraj::fg {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

enum class FactorKind {
  WnoaPrior,            // white-noise-on-acceleration motion prior (binary)
  PoseMeasurement,      // direct pose observation of one knot
  GroundtruthPose,      // pose observation through the groundtruth channel
  LoopClosureRelative,  // relative transform between two knots
};

// Declarative description of one factor; evaluation lives in free
// functions so the same spec can be replayed against different states.
struct FactorSpec {
  FactorKind kind = FactorKind::PoseMeasurement;
  int knot_a = -1;  // only knot (unary), earlier knot (motion prior),
                    // or "from" knot (relative)
  int knot_b = -1;  // later / "to" knot; unused for unary factors
  Pose meas;        // measured pose / relative transform (unused for WNOA)
  NoiseBinding noise = NoiseBinding::StaticMeasurement;
  int iw_index = -1;  // entry in NoiseParameters::upsilons, if PerFactorIW

  bool unary() const { return knot_b < 0; }
};

// A full estimation problem: states plus the factors tying them together.
struct Problem {
  std::vector<StateKnot> knots;
  std::vector<FactorSpec> factors;

  // pose-graph style problems carry no velocities; block size drops to 6
  bool pose_only = false;

  // index of a gauge-fixed knot (held constant, zero covariance); -1 = none
  int fixed_knot = -1;

  int local_dim() const { return pose_only ? 6 : 12; }
};

// --- residuals ------------------------------------------------------------

// log(T * meas^-1): zero iff the knot pose equals the measured pose.
lie::Vec6 pose_meas_error(const StateKnot& knot, const Pose& meas);

// log((T_to * T_from^-1) * rel^-1)
lie::Vec6 relative_pose_error(const StateKnot& from, const StateKnot& to,
                              const Pose& rel);

// Motion-prior residual over one interval; pi = log(T_next * T_prev^-1):
//   e_pose = pi - dt * varpi_prev
//   e_vel  = jac_inv_se3(pi) * varpi_next - varpi_prev
// Throws NonPositiveDt when next.t <= prev.t.
Vec12 wnoa_error(const StateKnot& prev, const StateKnot& next);

// Interval covariance of the motion prior: [[dt^3/3, dt^2/2],[dt^2/2, dt]]
// (Kronecker) Qc, and its closed-form inverse.
Mat12 wnoa_Qk(double dt, const lie::Mat6& Qc);
Mat12 wnoa_Qk_inv(double dt, const lie::Mat6& Qc);

// Negative log of the inverse-Wishart-style coupling between one
// per-factor covariance upsilon and the scale matrix Psi (additive
// constants dropped), with alpha = nu + dim + 2:
//   -(alpha-1)/2 ln|ups^-1| - nu/2 ln|Psi| + 1/2 tr(Psi ups^-1)
// Requires nu > dim - 1.
double iw_factor_value(const lie::Mat6& upsilon, const lie::Mat6& psi,
                       double nu);

// --- evaluation -----------------------------------------------------------

// Residual and per-knot Jacobians of one factor at the current states.
// Jacobians are taken with respect to the left perturbation
//   T <- exp_se3(dxi) * T,  varpi <- varpi + dvarpi,
// i.e. column blocks [d/d dxi, d/d dvarpi]; for pose_only problems the
// velocity columns are dropped. J[i] corresponds to knots[i].
struct FactorEval {
  Eigen::VectorXd e;
  std::vector<int> knots;
  std::vector<Eigen::MatrixXd> J;
};

FactorEval evaluate_factor(const Problem& problem, const FactorSpec& factor,
                           bool with_jacobians = true);

// Covariance (and its inverse + log-determinant) this factor resolves to.
// dt is only consulted for motion-prior factors.
Eigen::MatrixXd factor_cov(const FactorSpec& factor,
                           const NoiseParameters& params, double dt);
Eigen::MatrixXd factor_cov_inv(const FactorSpec& factor,
                               const NoiseParameters& params, double dt);
double factor_cov_logdet(const FactorSpec& factor,
                         const NoiseParameters& params, double dt);

// dt of the interval a motion-prior factor spans (next.t - prev.t).
double factor_dt(const Problem& problem, const FactorSpec& factor);

}  // namespace gvtraj::fg
