#pragma once

#include "blf/types.hpp"

namespace blf {

/// Desired joint state and its first three time derivatives at time `t`.
struct TrajectorySample {
  double t = 0.0;
  JointVector q;
  JointVector qdot;
  JointVector qddot;
  JointVector qdddot;
};

/// q_d,i(t) = a_i sin(omega t) (1 - exp(-alpha t^3)).
///
/// The cubic envelope makes position, velocity and acceleration start at zero,
/// so the closed loop is not kicked at t = 0.
struct TrajectoryDef {
  Vector amplitude;
  double omega = 1.0;
  double alpha = 0.3;

  int dof() const { return static_cast<int>(amplitude.size()); }
  TrajectorySample sample(double t) const;
};

}  // namespace blf
