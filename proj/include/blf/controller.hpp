#pragma once

#include <optional>

#include "blf/types.hpp"

namespace blf {

/// Shape of the error-dependent gain K_e.
enum class BarrierVariant {
  Logarithmic,  ///< K_i / (Delta_i^2 - e_i^2)
  Tangent,      ///< 1 + tan^2(pi/2 * e_i^2 / Delta_i^2)
};

enum class GainCheck {
  Strict,          ///< also require min K_i >= max Delta_i^2
  PositivityOnly,  ///< for studies of gain sets that violate the stability condition
};

/// Controller gains and constraint radii.
///
/// k is a positive diagonal (scalar gains are the equal-entries case), K and
/// Delta have one entry per joint, Gamma is the diagonal of the adaptation
/// gain matrix. tau_max, when set, clamps every applied torque component.
class GainConfig {
 public:
  GainConfig(Vector k, Vector K, Vector delta, Vector gamma,
             BarrierVariant variant = BarrierVariant::Logarithmic,
             std::optional<double> tau_max = std::nullopt, GainCheck check = GainCheck::Strict);

  const Vector& k() const { return k_; }
  const Vector& K() const { return K_; }
  const Vector& delta() const { return delta_; }
  const Vector& gamma() const { return gamma_; }
  BarrierVariant variant() const { return variant_; }
  const std::optional<double>& tau_max() const { return tau_max_; }

  int dof() const { return static_cast<int>(k_.size()); }
  int num_params() const { return static_cast<int>(gamma_.size()); }

  /// min_i K_i >= max_i Delta_i^2
  bool k_condition_holds() const;

  GainConfig with_tau_max(std::optional<double> tau_max) const;
  GainConfig with_variant(BarrierVariant variant) const;

 private:
  Vector k_, K_, delta_, gamma_;
  BarrierVariant variant_;
  std::optional<double> tau_max_;
};

/// Internal controller state. theta_hat is reconstructed from it without any
/// velocity signal:
///   theta_hat = i1 + Gamma Yd^T e - i2 + offset
/// where i1 integrates Gamma Yd^T (e_f + e) and i2 integrates Gamma dYd^T/dt e.
struct ControllerState {
  JointVector w;
  Vector i1;
  Vector i2;
  Vector offset;
};

using ParameterEstimate = Vector;

/// Relative margin below Delta_i at which the barrier is treated as reached.
constexpr double kBarrierGuard = 1e-9;

JointVector tracking_error(const JointVector& q_desired, const JointVector& q);

/// Error-dependent diagonal gain. Throws ConstraintBreach when any
/// |e_i| >= Delta_i (1 - kBarrierGuard).
DiagonalMatrix barrier_gain(const JointVector& e, const GainConfig& cfg);

/// e_f = -k e + w
JointVector filter_output(const JointVector& e, const JointVector& w, const GainConfig& cfg);

/// w_dot = -(k + 1) e_f - k e + K_e e
JointVector filter_state_rate(const JointVector& e, const JointVector& e_f,
                              const DiagonalMatrix& K_e, const GainConfig& cfg);

/// Starts the filter at w(0) = k e(0) (so e_f(0) = 0) and places the
/// integrators so that theta_hat(0) == theta_hat0.
ControllerState initial_controller_state(const JointVector& e0, const Matrix& Yd0,
                                         const Vector& theta_hat0, const GainConfig& cfg);

ParameterEstimate theta_hat(const ControllerState& state, const Matrix& Yd,
                            const JointVector& e, const GainConfig& cfg);

struct IntegratorRates {
  Vector i1;
  Vector i2;
};

IntegratorRates integrator_rates(const Matrix& Yd, const Matrix& Yd_rate, const JointVector& e,
                                 const JointVector& e_f, const GainConfig& cfg);

struct TorqueCommand {
  JointVector raw;      ///< Yd theta_hat + K_e e - k e_f
  JointVector applied;  ///< raw clamped to [-tau_max, tau_max]
};

TorqueCommand control_torque(const Matrix& Yd, const ParameterEstimate& theta_hat,
                             const DiagonalMatrix& K_e, const JointVector& e,
                             const JointVector& e_f, const GainConfig& cfg);

/// Gamma Yd^T eta. Needs the unmeasurable eta, so only analysis code calls it.
Vector oracle_theta_rate(const Matrix& Yd, const JointVector& eta, const GainConfig& cfg);

}  // namespace blf
