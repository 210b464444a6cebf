#include "blf/dynamics.hpp"

#include <cmath>
#include <string>

#include "blf/errors.hpp"

namespace blf {

ParamVector::ParamVector(const ManipulatorModel& model, Vector values) : values_(std::move(values)) {
  model.check_parameters(values_);
}

ParamVector ParamVector::unchecked(Vector values) { return ParamVector(std::move(values)); }

// ---------------------------------------------------------------------------
// TwoLinkPlanar

Vector TwoLinkPlanar::default_theta() {
  Vector theta(5);
  theta << 3.473, 0.196, 0.242, 5.3, 1.1;
  return theta;
}

void TwoLinkPlanar::check_parameters(const Vector& theta) const {
  if (theta.size() != num_params()) {
    throw InvalidArgument("two-link model expects 5 parameters, got " +
                          std::to_string(theta.size()));
  }
  if (!theta.allFinite()) throw InvalidArgument("parameter vector has non-finite entries");
  if (theta(0) <= 0.0 || theta(1) <= 0.0) {
    throw InvalidArgument("inertia parameters p1 and p2 must be positive");
  }
  if (theta(3) < 0.0 || theta(4) < 0.0) {
    throw InvalidArgument("viscous friction coefficients must be non-negative");
  }
  const ParamVector p = ParamVector::unchecked(theta);
  const int steps = static_cast<int>(std::lround(360.0 / grid_deg_));
  JointVector q = JointVector::Zero(2);
  for (int k = 0; k < steps; ++k) {
    q(1) = deg_to_rad(k * grid_deg_);
    const Matrix m = mass_matrix(p, q);
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
    if (!(lmin > 0.0)) {
      throw InvalidArgument("inertia matrix is not positive definite at q2 = " +
                            std::to_string(k * grid_deg_) + " deg");
    }
  }
}

Matrix TwoLinkPlanar::mass_matrix(const ParamVector& theta, const JointVector& q) const {
  const double c2 = std::cos(q(1));
  const double off = theta[1] + theta[2] * c2;
  Matrix m(2, 2);
  m << theta[0] + 2.0 * theta[2] * c2, off,
       off, theta[1];
  return m;
}

Matrix TwoLinkPlanar::coriolis_matrix(const ParamVector& theta, const JointVector& q,
                                      const JointVector& qdot) const {
  const double h = theta[2] * std::sin(q(1));
  Matrix v(2, 2);
  v << -h * qdot(1), -h * (qdot(0) + qdot(1)),
        h * qdot(0), 0.0;
  return v;
}

JointVector TwoLinkPlanar::gravity_vector(const ParamVector&, const JointVector&) const {
  return JointVector::Zero(2);
}

DiagonalMatrix TwoLinkPlanar::friction_matrix(const ParamVector& theta) const {
  return DiagonalMatrix(Vector{{theta[3], theta[4]}});
}

Matrix TwoLinkPlanar::regressor(const JointVector& q, const JointVector& qd,
                                const JointVector& qdd) const {
  const double c2 = std::cos(q(1));
  const double s2 = std::sin(q(1));
  Matrix y = Matrix::Zero(2, 5);
  y(0, 0) = qdd(0);
  y(0, 1) = qdd(1);
  y(0, 2) = c2 * (2.0 * qdd(0) + qdd(1)) - s2 * (2.0 * qd(0) * qd(1) + qd(1) * qd(1));
  y(0, 3) = qd(0);
  y(1, 1) = qdd(0) + qdd(1);
  y(1, 2) = c2 * qdd(0) + s2 * qd(0) * qd(0);
  y(1, 4) = qd(1);
  return y;
}

Matrix TwoLinkPlanar::regressor_rate(const JointVector& q, const JointVector& qd,
                                     const JointVector& qdd, const JointVector& qddd) const {
  const double c2 = std::cos(q(1));
  const double s2 = std::sin(q(1));
  const double w2 = qd(1);
  Matrix y = Matrix::Zero(2, 5);
  y(0, 0) = qddd(0);
  y(0, 1) = qddd(1);
  y(0, 2) = -s2 * w2 * (2.0 * qdd(0) + qdd(1)) + c2 * (2.0 * qddd(0) + qddd(1)) -
            c2 * w2 * (2.0 * qd(0) * qd(1) + qd(1) * qd(1)) -
            s2 * (2.0 * qdd(0) * qd(1) + 2.0 * qd(0) * qdd(1) + 2.0 * qd(1) * qdd(1));
  y(0, 3) = qdd(0);
  y(1, 1) = qddd(0) + qddd(1);
  y(1, 2) = -s2 * w2 * qdd(0) + c2 * qddd(0) + c2 * w2 * qd(0) * qd(0) +
            2.0 * s2 * qd(0) * qdd(0);
  y(1, 4) = qdd(1);
  return y;
}

InertiaBounds TwoLinkPlanar::inertia_bounds(const ParamVector& theta) const {
  InertiaBounds b{std::numeric_limits<double>::infinity(), 0.0};
  const int steps = static_cast<int>(std::lround(360.0 / grid_deg_));
  JointVector q = JointVector::Zero(2);
  for (int k = 0; k < steps; ++k) {
    q(1) = deg_to_rad(k * grid_deg_);
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(mass_matrix(theta, q),
                                                            Eigen::EigenvaluesOnly)
                          .eigenvalues();
    b.m1 = std::min(b.m1, ev.minCoeff());
    b.m2 = std::max(b.m2, ev.maxCoeff());
  }
  return b;
}

// ---------------------------------------------------------------------------

Matrix desired_regressor(const ManipulatorModel& model, const TrajectorySample& s) {
  return model.regressor(s.q, s.qdot, s.qddot);
}

Matrix desired_regressor_rate(const ManipulatorModel& model, const TrajectorySample& s) {
  return model.regressor_rate(s.q, s.qdot, s.qddot, s.qdddot);
}

JointVector forward_dynamics(const ManipulatorModel& model, const ParamVector& theta,
                             const JointVector& q, const JointVector& qdot,
                             const JointVector& tau) {
  const Matrix m = model.mass_matrix(theta, q);
  const JointVector rhs = tau - model.coriolis_matrix(theta, q, qdot) * qdot -
                          model.gravity_vector(theta, q) - model.friction_matrix(theta) * qdot;
  const Eigen::FullPivLU<Matrix> lu(m);
  if (!lu.isInvertible()) throw SingularMass("inertia matrix is singular");
  return lu.solve(rhs);
}

JointVector inverse_dynamics(const ManipulatorModel& model, const ParamVector& theta,
                             const JointVector& q, const JointVector& qdot,
                             const JointVector& qddot) {
  return model.mass_matrix(theta, q) * qddot + model.coriolis_matrix(theta, q, qdot) * qdot +
         model.gravity_vector(theta, q) + model.friction_matrix(theta) * qdot;
}

double kinetic_energy(const ManipulatorModel& model, const ParamVector& theta,
                      const JointVector& q, const JointVector& qdot) {
  return 0.5 * qdot.dot(model.mass_matrix(theta, q) * qdot);
}

}  // namespace blf
