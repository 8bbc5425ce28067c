#pragma once

#include "gvtraj/lie/se3.hpp"

namespace gvtraj::fg {

// One estimation time: pose plus body-centric velocity.
// T maps world coordinates into the body frame; varpi = (v; omega) is the
// body-frame generalized velocity matching the twist ordering used by lie::.
struct StateKnot {
  double t = 0.0;
  Pose T;
  lie::Vec6 varpi = lie::Vec6::Zero();
};

}  // namespace gvtraj::fg
