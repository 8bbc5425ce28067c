#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gvtraj/lie/se3.hpp"

namespace gvtraj::fg {

// How a factor's noise model resolves into NoiseParameters.
enum class NoiseBinding {
  MotionPrior,        // Qc, scaled per interval length
  StaticMeasurement,  // shared W
  StaticGroundtruth,  // shared W_gt
  PerFactorIW,        // per-factor upsilon under the inverse-Wishart prior
};

// All learnable noise parameters of a problem. Every factor binds to
// exactly one entry here.
struct NoiseParameters {
  static constexpr int kDim = 6;

  // power-spectral-density matrix of the white-noise-on-acceleration prior
  lie::Mat6 Qc = lie::Mat6::Identity();

  std::optional<lie::Mat6> W;     // shared measurement covariance
  std::optional<lie::Mat6> W_gt;  // shared groundtruth-channel covariance

  // inverse-Wishart prior over the per-factor covariances:
  // scale matrix Psi (det kept equal to beta), degrees of freedom nu
  lie::Mat6 Psi = lie::Mat6::Identity();
  double nu = 6.0;
  double beta = 1.0;
  std::vector<lie::Mat6> upsilons;

  double alpha() const { return nu + kDim + 2.0; }

  // Sets Psi to the isotropic matrix with determinant beta; the natural
  // starting point for the scale matrix before any learning.
  void reset_psi() {
    Psi = std::pow(beta, 1.0 / kDim) * lie::Mat6::Identity();
  }

  // Mode of the inverse-Wishart prior: the default initial upsilon.
  lie::Mat6 iw_mode() const { return Psi / (alpha() - 1.0); }
};

}  // namespace gvtraj::fg
