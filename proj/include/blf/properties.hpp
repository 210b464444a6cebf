#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blf/controller.hpp"
#include "blf/dynamics.hpp"
#include "blf/simulator.hpp"

namespace blf {

/// Outcome of one randomized structural check. `worst` is the largest
/// residual seen, compared against `tolerance`.
struct PropertyResult {
  std::string name;
  std::size_t draws = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double tolerance = 0.0;

  bool passed() const { return failures == 0; }
};

/// Random parameter vector that the two-link model accepts.
Vector random_two_link_theta(std::uint64_t seed);

PropertyResult check_mass_symmetry(const ManipulatorModel& model, const ParamVector& theta,
                                   std::size_t draws, std::uint64_t seed);

/// min eigenvalue of M over a 360-point grid of the last joint.
PropertyResult check_positive_definite(const ManipulatorModel& model, const ParamVector& theta);

/// |xi^T (Mdot - 2 Vm) xi| / ||xi||^2 with Mdot from a central difference
/// of M along q + h qdot, h = 1e-6.
PropertyResult check_skew_symmetry(const ManipulatorModel& model, const ParamVector& theta,
                                   std::size_t draws, std::uint64_t seed,
                                   double tolerance = 1e-9);

/// ||Vm(xi, nu) eta - Vm(xi, eta) nu||
PropertyResult check_coriolis_switch(const ManipulatorModel& model, const ParamVector& theta,
                                     std::size_t draws, std::uint64_t seed,
                                     double tolerance = 1e-10);

/// ||Y theta - inverse_dynamics|| / (1 + ||tau||) over random theta as well.
/// Random theta is drawn for the two-link model only.
PropertyResult check_regressor_identity(const ManipulatorModel& model, std::size_t draws,
                                        std::uint64_t seed, double tolerance = 1e-10);

/// forward_dynamics(inverse_dynamics(a)) == a
PropertyResult check_dynamics_round_trip(const ManipulatorModel& model, const ParamVector& theta,
                                         std::size_t draws, std::uint64_t seed,
                                         double tolerance = 1e-10);

/// Relative kinetic-energy drift of an unforced, frictionless RK4 rollout
/// (dt = 1e-4, 1 s). Friction entries of theta are zeroed.
PropertyResult check_energy_conservation(const ManipulatorModel& model, const ParamVector& theta,
                                         std::size_t draws, std::uint64_t seed,
                                         double tolerance = 1e-6);

/// Closed-form dYd/dt against a central difference of Yd (h = 1e-6).
PropertyResult check_regressor_rate(const ManipulatorModel& model,
                                    const TrajectoryDef& trajectory,
                                    const std::vector<double>& times, double tolerance = 1e-6);

/// Barrier gain strictly increasing in |e_i| on [0, Delta_i (1 - 1e-6)].
PropertyResult check_barrier_monotonicity(const GainConfig& cfg, std::size_t samples);

/// Integral-form theta_hat versus Gamma Yd^T eta along a simulated run.
PropertyResult check_update_law_equivalence(const SimConfig& sim, double tolerance = 1e-3);

/// Everything above with fixed seeds; same inputs give the same results.
std::vector<PropertyResult> run_property_suite(const ManipulatorModel& model,
                                               const ParamVector& theta,
                                               const SimConfig& sim);

}  // namespace blf
