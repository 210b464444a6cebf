#include "blf/simulator.hpp"

#include <cmath>
#include <string>

#include "blf/errors.hpp"
#include "blf/integrator.hpp"
#include "blf/lyapunov.hpp"

namespace blf {

long SimConfig::steps() const { return std::lround(horizon / dt); }

void SimConfig::validate() const {
  if (!model) throw InvalidArgument("simulation needs a manipulator model");
  const int n = dof();
  const int p = num_params();
  if (!(std::isfinite(dt) && dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(std::isfinite(horizon) && horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (std::abs(steps() * dt - horizon) > 1e-9 * horizon) {
    throw InvalidArgument("horizon must be an integer multiple of dt");
  }
  if (theta_true.size() != p) throw InvalidArgument("theta size does not match the model");
  if (gains.dof() != n) throw InvalidArgument("gain dimensions do not match the model");
  if (gains.num_params() != p) throw InvalidArgument("gamma size does not match the model");
  if (trajectory.dof() != n) throw InvalidArgument("trajectory amplitude size mismatch");
  if (!std::isfinite(trajectory.omega) || !std::isfinite(trajectory.alpha) ||
      trajectory.alpha < 0.0) {
    throw InvalidArgument("trajectory omega/alpha must be finite, alpha >= 0");
  }
  if (q0.size() != n || qdot0.size() != n) throw InvalidArgument("initial state size mismatch");
  if (theta_hat0.size() != p) throw InvalidArgument("theta_hat0 size mismatch");
  if (!q0.allFinite() || !qdot0.allFinite() || !theta_hat0.allFinite() ||
      !trajectory.amplitude.allFinite()) {
    throw InvalidArgument("initial conditions must be finite");
  }
  const JointVector e0 = tracking_error(trajectory.sample(0.0).q, q0);
  for (int i = 0; i < n; ++i) {
    if (!(std::abs(e0(i)) < gains.delta()(i) * (1.0 - kBarrierGuard))) {
      throw InvalidArgument("initial tracking error of joint " + std::to_string(i + 1) +
                            " is outside the constraint region");
    }
  }
}

ControllerState SimState::controller(const Vector& offset) const {
  return ControllerState{w(), i1(), i2(), offset};
}

SimState initial_state(const SimConfig& cfg) {
  const int n = cfg.dof();
  const int p = cfg.num_params();
  const TrajectorySample d0 = cfg.trajectory.sample(0.0);
  const JointVector e0 = tracking_error(d0.q, cfg.q0);
  const ControllerState c0 = initial_controller_state(e0, desired_regressor(*cfg.model, d0),
                                                      cfg.theta_hat0, cfg.gains);
  SimState s;
  s.t = 0.0;
  s.n = n;
  s.p = p;
  s.x.resize(3 * n + 2 * p);
  s.x << cfg.q0, cfg.qdot0, c0.w, c0.i1, c0.i2;
  return s;
}

ControlSignals control_signals(const SimState& s, const SimConfig& cfg) {
  ControlSignals c;
  c.desired = cfg.trajectory.sample(s.t);
  c.e = tracking_error(c.desired.q, s.q());
  c.e_f = filter_output(c.e, s.w(), cfg.gains);
  c.K_e = barrier_gain(c.e, cfg.gains);
  c.Yd = desired_regressor(*cfg.model, c.desired);
  c.Yd_rate = desired_regressor_rate(*cfg.model, c.desired);
  c.theta_hat = theta_hat(s.controller(cfg.theta_hat0), c.Yd, c.e, cfg.gains);
  c.tau = control_torque(c.Yd, c.theta_hat, c.K_e, c.e, c.e_f, cfg.gains);
  return c;
}

Vector closed_loop_rhs(const SimState& s, const SimConfig& cfg) {
  const ControlSignals c = control_signals(s, cfg);
  const JointVector qdot = s.qdot();
  const JointVector qddot =
      forward_dynamics(*cfg.model, cfg.theta_true, s.q(), qdot, c.tau.applied);
  const IntegratorRates rates = integrator_rates(c.Yd, c.Yd_rate, c.e, c.e_f, cfg.gains);

  Vector dx(s.x.size());
  dx << qdot, qddot, filter_state_rate(c.e, c.e_f, c.K_e, cfg.gains), rates.i1, rates.i2;
  if (!dx.allFinite()) throw NonFinite("state derivative is not finite", s.t);
  return dx;
}

SimState rk4_step(const SimState& s, const SimConfig& cfg) {
  auto f = [&](double t, const Vector& x) {
    SimState stage{t, x, s.n, s.p};
    return closed_loop_rhs(stage, cfg);
  };
  SimState next = s;
  next.x = rk4_step(f, s.t, s.x, cfg.dt);
  next.t = s.t + cfg.dt;
  return next;
}

JointVector compute_eta(const SimState& s, const SimConfig& cfg) {
  const TrajectorySample d = cfg.trajectory.sample(s.t);
  const JointVector e = tracking_error(d.q, s.q());
  const JointVector e_f = filter_output(e, s.w(), cfg.gains);
  return (d.qdot - s.qdot()) + e + e_f;
}

namespace {

TraceRecord make_record(const SimState& s, const SimConfig& cfg) {
  const ControlSignals c = control_signals(s, cfg);
  TraceRecord r;
  r.t = s.t;
  r.q = s.q();
  r.q_desired = c.desired.q;
  r.e = c.e;
  r.e_f = c.e_f;
  r.eta = (c.desired.qdot - s.qdot()) + c.e + c.e_f;
  r.tau = c.tau.applied;
  r.tau_raw = c.tau.raw;
  r.theta_hat = c.theta_hat;
  r.K_e = c.K_e.diagonal();
  r.V = blf_value(r.e, r.e_f, r.eta, cfg.theta_true.values() - r.theta_hat,
                  cfg.model->mass_matrix(cfg.theta_true, r.q), cfg.gains);
  return r;
}

}  // namespace

Trace run(const SimConfig& cfg) {
  cfg.validate();
  const long steps = cfg.steps();
  Trace trace;
  trace.saturated = cfg.gains.tau_max().has_value();
  trace.records.reserve(static_cast<std::size_t>(steps) + 1);

  SimState s = initial_state(cfg);
  for (long i = 0;; ++i) {
    try {
      trace.records.push_back(make_record(s, cfg));
      if (!trace.records.back().theta_hat.allFinite() || !s.x.allFinite()) {
        throw NonFinite("state is not finite", s.t);
      }
      if (i == steps) break;
      s = rk4_step(s, cfg);
      // Uniform time grid; avoids accumulating round-off in t.
      s.t = static_cast<double>(i + 1) * cfg.dt;
    } catch (const ConstraintBreach& b) {
      throw ConstraintBreach(std::string(b.what()) + " near t = " + std::to_string(s.t) + " s",
                             b.joint(), s.t);
    } catch (const NonFinite& nf) {
      throw NonFinite(nf.what(), s.t);
    }
  }
  trace.final_state = s;
  return trace;
}

}  // namespace blf
