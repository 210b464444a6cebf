#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blf/controller.hpp"
#include "blf/simulator.hpp"
#include "blf/types.hpp"

namespace blf {

/// Barrier part of V: sum_i (K_i/2) ln(Delta_i^2 / (Delta_i^2 - e_i^2)) for
/// the logarithmic variant, sum_i (Delta_i^2/pi) tan(pi/2 e_i^2/Delta_i^2)
/// for the tangent one. Throws ConstraintBreach outside the region.
double barrier_potential(const JointVector& e, const GainConfig& cfg);

/// V = 1/2 eta^T M eta + 1/2 e_f^T e_f + barrier_potential(e) + 1/2 theta~^T Gamma^-1 theta~
///
/// Needs the true parameters (through theta_tilde and M), so this is an
/// analysis-time quantity only.
double blf_value(const JointVector& e, const JointVector& e_f, const JointVector& eta,
                 const Vector& theta_tilde, const Matrix& M_at_q, const GainConfig& cfg);

struct LambdaBounds {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double envelope = 0.0;      ///< rho: |e_i| <= rho Delta_i assumed for lambda2
  double max_barrier_gain = 0.0;  ///< largest K_e entry over that envelope
};

/// lambda1 = 1/2 min{m1, 1, min K_i / max Delta_i^2, lambda_min(Gamma^-1)}
/// lambda2 = 1/2 max{m2, 1, max K_e, lambda_max(Gamma^-1)}
/// K_e is unbounded on the constraint region, so lambda2 is evaluated with
/// |e_i| <= rho Delta_i.
LambdaBounds lambda_bounds(const GainConfig& cfg, double m1, double m2, double rho = 0.99);

struct AnalysisBounds {
  double m1 = 0.0;
  double m2 = 0.0;
  std::optional<double> zeta1;
  std::optional<double> zeta2;
  std::optional<double> kn;
  double z0_norm = 0.0;
  double envelope = 0.99;
};

/// ||z(0)|| with z = [eta; e_f; e; theta - theta_hat] at t = 0.
double initial_z_norm(const SimConfig& cfg);

enum class CheckStatus { Pass, Fail, NotChecked };

const char* to_string(CheckStatus s);

struct CertificationItem {
  std::string name;
  CheckStatus status = CheckStatus::NotChecked;
  double lhs = 0.0;
  std::string relation;
  double rhs = 0.0;
  std::string note;
};

struct CertificationReport {
  std::vector<CertificationItem> items;
  LambdaBounds lambdas;
  AnalysisBounds bounds;

  /// True when every condition that could be checked passed.
  bool checked_conditions_pass() const;
  const CertificationItem* find(const std::string& name) const;
};

/// Evaluates the stability conditions:
///   K-condition   min K_i >= max Delta_i^2
///   k-design      min_i k_i >= (1/m1)(1 + zeta1^2 kn + zeta2^2 kn)
///   kn-bound      kn > 1 + (lambda2/lambda1) ||z(0)||^2
/// Conditions whose constants were not supplied are NotChecked.
CertificationReport certify_gains(const GainConfig& cfg, const AnalysisBounds& bounds);

struct DecreaseReport {
  std::size_t steps = 0;
  double tolerance = 0.0;
  std::size_t increases = 0;  ///< steps with V(t+dt) - V(t) > tolerance
  double max_increase = 0.0;  ///< largest V(t+dt) - V(t), may be negative
  std::optional<std::size_t> first_increase;
  double V0 = 0.0;
  double V_final = 0.0;
  /// Least-squares fit of -dV/dt ~ beta ||x||^2 and the sample correlation
  /// between dV/dt and -||x||^2.
  double beta_fit = 0.0;
  double correlation = 0.0;
  bool saturated = false;
  bool conditions_met = true;
};

/// Numerical check that V is non-increasing along a trace.
DecreaseReport verify_decrease(const Trace& trace, const GainConfig& cfg,
                               double relative_tolerance = 1e-6);

struct ConstraintReport {
  std::size_t violations = 0;
  std::optional<std::size_t> first_violation;  ///< record index
  std::optional<int> first_joint;
  Vector max_ratio;  ///< max_t |e_i| / Delta_i
};

ConstraintReport check_constraints(const Trace& trace, const Vector& delta);

struct RunMetrics {
  Vector max_abs_error;
  std::optional<double> settling_time;  ///< absent if the band is never held
  Vector steady_state_max_error;        ///< over the final tail window
  Vector max_abs_tau;
  Vector theta_hat_final;
  Vector theta_hat_drift;  ///< |least-squares slope| of theta_hat over the tail window
  double tail_start = 0.0;
};

/// `band` in rad; the tail window is the final `tail_fraction` of the horizon.
RunMetrics run_metrics(const Trace& trace, double band, double tail_fraction = 0.25);

struct UpdateLawCheck {
  double max_relative_discrepancy = 0.0;
  double at_time = 0.0;
};

/// Compares the central difference of theta_hat along the trace with
/// Gamma Yd^T eta, scaled by 1 + ||Gamma Yd^T eta||.
UpdateLawCheck update_law_discrepancy(const Trace& trace, const ManipulatorModel& model,
                                      const TrajectoryDef& trajectory, const GainConfig& cfg);

}  // namespace blf
