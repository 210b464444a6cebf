#pragma once

#include "blf/trajectory.hpp"
#include "blf/types.hpp"

namespace blf {

class ManipulatorModel;

/// Constant physical parameter vector theta (the linear-parameterization
/// coefficients). Constructing through a model validates it against that
/// model; `unchecked` skips validation and exists for formula-level tests.
class ParamVector {
 public:
  ParamVector(const ManipulatorModel& model, Vector values);
  static ParamVector unchecked(Vector values);

  const Vector& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_(i); }

 private:
  explicit ParamVector(Vector values) : values_(std::move(values)) {}
  Vector values_;
};

/// Eigenvalue bounds m1 I <= M(q) <= m2 I.
struct InertiaBounds {
  double m1 = 0.0;
  double m2 = 0.0;
};

/// Rigid serial-link model M(q) qdd + Vm(q, qd) qd + G(q) + Fd qd = tau,
/// with a regressor Y such that Y(q, qd, qdd) theta equals the left side.
class ManipulatorModel {
 public:
  virtual ~ManipulatorModel() = default;

  virtual int dof() const = 0;
  virtual int num_params() const = 0;

  /// Throws InvalidArgument when `theta` cannot describe a physical arm.
  virtual void check_parameters(const Vector& theta) const = 0;

  virtual Matrix mass_matrix(const ParamVector& theta, const JointVector& q) const = 0;
  virtual Matrix coriolis_matrix(const ParamVector& theta, const JointVector& q,
                                 const JointVector& qdot) const = 0;
  virtual JointVector gravity_vector(const ParamVector& theta, const JointVector& q) const = 0;
  virtual DiagonalMatrix friction_matrix(const ParamVector& theta) const = 0;

  virtual Matrix regressor(const JointVector& q, const JointVector& qdot,
                           const JointVector& qddot) const = 0;
  /// d/dt Y(q(t), qd(t), qdd(t)) by the chain rule.
  virtual Matrix regressor_rate(const JointVector& q, const JointVector& qdot,
                                const JointVector& qddot, const JointVector& qdddot) const = 0;

  virtual InertiaBounds inertia_bounds(const ParamVector& theta) const = 0;
};

/// Planar two-link arm moving in the horizontal plane (no gravity) with
/// viscous joint friction. theta = [p1, p2, p3, fd1, fd2]:
///
///   M  = [[p1 + 2 p3 c2, p2 + p3 c2], [p2 + p3 c2, p2]]
///   Vm = [[-p3 s2 qd2, -p3 s2 (qd1 + qd2)], [p3 s2 qd1, 0]]
///   Fd = diag(fd1, fd2)
class TwoLinkPlanar : public ManipulatorModel {
 public:
  /// Grid resolution used for the positive-definiteness check and m1/m2.
  explicit TwoLinkPlanar(double grid_resolution_deg = 1.0) : grid_deg_(grid_resolution_deg) {}

  int dof() const override { return 2; }
  int num_params() const override { return 5; }

  void check_parameters(const Vector& theta) const override;

  Matrix mass_matrix(const ParamVector& theta, const JointVector& q) const override;
  Matrix coriolis_matrix(const ParamVector& theta, const JointVector& q,
                         const JointVector& qdot) const override;
  JointVector gravity_vector(const ParamVector& theta, const JointVector& q) const override;
  DiagonalMatrix friction_matrix(const ParamVector& theta) const override;

  Matrix regressor(const JointVector& q, const JointVector& qdot,
                   const JointVector& qddot) const override;
  Matrix regressor_rate(const JointVector& q, const JointVector& qdot, const JointVector& qddot,
                        const JointVector& qdddot) const override;

  InertiaBounds inertia_bounds(const ParamVector& theta) const override;

  /// Testbed parameters shipped with the bundled scenario.
  static Vector default_theta();

 private:
  double grid_deg_;
};

Matrix desired_regressor(const ManipulatorModel& model, const TrajectorySample& s);
Matrix desired_regressor_rate(const ManipulatorModel& model, const TrajectorySample& s);

/// qdd = M^-1 (tau - Vm qd - G - Fd qd). Throws SingularMass if M cannot be
/// factored.
JointVector forward_dynamics(const ManipulatorModel& model, const ParamVector& theta,
                             const JointVector& q, const JointVector& qdot,
                             const JointVector& tau);

JointVector inverse_dynamics(const ManipulatorModel& model, const ParamVector& theta,
                             const JointVector& q, const JointVector& qdot,
                             const JointVector& qddot);

double kinetic_energy(const ManipulatorModel& model, const ParamVector& theta,
                      const JointVector& q, const JointVector& qdot);

}  // namespace blf
