#include "blf/controller.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "blf/errors.hpp"

namespace blf {
namespace {

void require_positive(const Vector& v, const char* name) {
  if (v.size() == 0) throw InvalidArgument(std::string(name) + " must not be empty");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i)) || v(i) <= 0.0) {
      throw InvalidArgument(std::string(name) + "[" + std::to_string(i) +
                            "] must be finite and strictly positive");
    }
  }
}

}  // namespace

GainConfig::GainConfig(Vector k, Vector K, Vector delta, Vector gamma, BarrierVariant variant,
                       std::optional<double> tau_max, GainCheck check)
    : k_(std::move(k)),
      K_(std::move(K)),
      delta_(std::move(delta)),
      gamma_(std::move(gamma)),
      variant_(variant),
      tau_max_(tau_max) {
  require_positive(k_, "k");
  require_positive(K_, "K");
  require_positive(delta_, "delta");
  require_positive(gamma_, "gamma");
  if (K_.size() != k_.size() || delta_.size() != k_.size()) {
    throw InvalidArgument("k, K and delta must have one entry per joint");
  }
  if (tau_max_ && !(std::isfinite(*tau_max_) && *tau_max_ > 0.0)) {
    throw InvalidArgument("tau_max must be finite and strictly positive");
  }
  if (check == GainCheck::Strict && !k_condition_holds()) {
    throw InvalidArgument("gain condition violated: min K_i = " + std::to_string(K_.minCoeff()) +
                          " < max Delta_i^2 = " +
                          std::to_string(delta_.array().square().maxCoeff()));
  }
}

bool GainConfig::k_condition_holds() const {
  return K_.minCoeff() >= delta_.array().square().maxCoeff();
}

GainConfig GainConfig::with_tau_max(std::optional<double> tau_max) const {
  GainConfig copy = *this;
  copy.tau_max_ = tau_max;
  return copy;
}

GainConfig GainConfig::with_variant(BarrierVariant variant) const {
  GainConfig copy = *this;
  copy.variant_ = variant;
  return copy;
}

JointVector tracking_error(const JointVector& q_desired, const JointVector& q) {
  return q_desired - q;
}

DiagonalMatrix barrier_gain(const JointVector& e, const GainConfig& cfg) {
  const Vector& delta = cfg.delta();
  Vector diag(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (!(std::abs(e(i)) < delta(i) * (1.0 - kBarrierGuard))) {
      throw ConstraintBreach("tracking error of joint " + std::to_string(i + 1) +
                                 " reached its constraint radius",
                             static_cast<int>(i), std::numeric_limits<double>::quiet_NaN());
    }
    const double d2 = delta(i) * delta(i);
    const double e2 = e(i) * e(i);
    if (cfg.variant() == BarrierVariant::Logarithmic) {
      diag(i) = cfg.K()(i) / (d2 - e2);
    } else {
      const double t = std::tan(0.5 * kPi * e2 / d2);
      diag(i) = 1.0 + t * t;
    }
  }
  return DiagonalMatrix(diag);
}

JointVector filter_output(const JointVector& e, const JointVector& w, const GainConfig& cfg) {
  return w - cfg.k().cwiseProduct(e);
}

JointVector filter_state_rate(const JointVector& e, const JointVector& e_f,
                              const DiagonalMatrix& K_e, const GainConfig& cfg) {
  const Vector& k = cfg.k();
  return -(k.array() + 1.0).matrix().cwiseProduct(e_f) - k.cwiseProduct(e) + K_e * e;
}

ControllerState initial_controller_state(const JointVector& e0, const Matrix& Yd0,
                                         const Vector& theta_hat0, const GainConfig& cfg) {
  ControllerState s;
  s.w = cfg.k().cwiseProduct(e0);
  s.i1 = -cfg.gamma().cwiseProduct(Yd0.transpose() * e0);
  s.i2 = Vector::Zero(cfg.num_params());
  s.offset = theta_hat0;
  return s;
}

ParameterEstimate theta_hat(const ControllerState& state, const Matrix& Yd, const JointVector& e,
                            const GainConfig& cfg) {
  return state.i1 + cfg.gamma().cwiseProduct(Yd.transpose() * e) - state.i2 + state.offset;
}

IntegratorRates integrator_rates(const Matrix& Yd, const Matrix& Yd_rate, const JointVector& e,
                                 const JointVector& e_f, const GainConfig& cfg) {
  return {cfg.gamma().cwiseProduct(Yd.transpose() * (e_f + e)),
          cfg.gamma().cwiseProduct(Yd_rate.transpose() * e)};
}

TorqueCommand control_torque(const Matrix& Yd, const ParameterEstimate& theta_hat,
                             const DiagonalMatrix& K_e, const JointVector& e,
                             const JointVector& e_f, const GainConfig& cfg) {
  TorqueCommand cmd;
  cmd.raw = Yd * theta_hat + K_e * e - cfg.k().cwiseProduct(e_f);
  cmd.applied = cmd.raw;
  if (const auto& limit = cfg.tau_max()) {
    cmd.applied = cmd.raw.cwiseMax(-*limit).cwiseMin(*limit);
  }
  return cmd;
}

Vector oracle_theta_rate(const Matrix& Yd, const JointVector& eta, const GainConfig& cfg) {
  return cfg.gamma().cwiseProduct(Yd.transpose() * eta);
}

}  // namespace blf
