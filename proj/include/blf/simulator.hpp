#pragma once

#include <memory>
#include <vector>

#include "blf/controller.hpp"
#include "blf/dynamics.hpp"
#include "blf/trajectory.hpp"
#include "blf/types.hpp"

namespace blf {

/// Everything needed for one deterministic closed-loop run.
struct SimConfig {
  std::shared_ptr<const ManipulatorModel> model;
  ParamVector theta_true;
  GainConfig gains;
  TrajectoryDef trajectory;
  JointVector q0;
  JointVector qdot0;
  Vector theta_hat0;
  double dt = 1e-3;
  double horizon = 60.0;

  int dof() const { return model->dof(); }
  int num_params() const { return model->num_params(); }
  /// Number of integration steps; the trace has steps() + 1 records.
  long steps() const;

  /// Throws InvalidArgument on any inconsistency, including an initial
  /// tracking error outside the constraint region.
  void validate() const;
};

/// Closed-loop state packed as x = [q, qdot, w, i1, i2].
struct SimState {
  double t = 0.0;
  Vector x;
  int n = 0;
  int p = 0;

  auto q() const { return x.segment(0, n); }
  auto qdot() const { return x.segment(n, n); }
  auto w() const { return x.segment(2 * n, n); }
  auto i1() const { return x.segment(3 * n, p); }
  auto i2() const { return x.segment(3 * n + p, p); }

  ControllerState controller(const Vector& offset) const;
};

SimState initial_state(const SimConfig& cfg);

/// Controller-side signals at one state; computed from q, the desired
/// trajectory and controller state only.
struct ControlSignals {
  TrajectorySample desired;
  JointVector e;
  JointVector e_f;
  DiagonalMatrix K_e;
  Matrix Yd;
  Matrix Yd_rate;
  ParameterEstimate theta_hat;
  TorqueCommand tau;
};

ControlSignals control_signals(const SimState& s, const SimConfig& cfg);

/// d/dt of the packed state. Throws ConstraintBreach or NonFinite.
Vector closed_loop_rhs(const SimState& s, const SimConfig& cfg);

SimState rk4_step(const SimState& s, const SimConfig& cfg);

/// eta = edot + e + e_f, using the true joint velocity. Diagnostic only.
JointVector compute_eta(const SimState& s, const SimConfig& cfg);

struct TraceRecord {
  double t = 0.0;
  JointVector q, q_desired, e, e_f, eta;
  JointVector tau, tau_raw;
  Vector theta_hat;
  double V = 0.0;
  Vector K_e;
};

struct Trace {
  std::vector<TraceRecord> records;
  SimState final_state;
  bool saturated = false;  ///< torque limit was enabled for the run
};

/// Integrates from t = 0 to the horizon with fixed-step RK4, logging every step.
Trace run(const SimConfig& cfg);

}  // namespace blf
