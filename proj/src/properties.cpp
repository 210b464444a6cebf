#include "blf/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blf/integrator.hpp"
#include "blf/lyapunov.hpp"

namespace blf {
namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vector vector(int n, double lo, double hi) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

void record(PropertyResult& r, double residual) {
  ++r.draws;
  r.worst = std::max(r.worst, residual);
  if (!(residual <= r.tolerance)) ++r.failures;
}

}  // namespace

Vector random_two_link_theta(std::uint64_t seed) {
  Sampler s(seed);
  const double p1 = s.uniform(1.0, 5.0);
  const double p2 = s.uniform(0.1, 1.0);
  // det M = p1 p2 - p2^2 - p3^2 cos^2 q2 > 0 for all q2 iff p3^2 < p2 (p1 - p2).
  const double p3 = s.uniform(0.0, 0.9) * std::sqrt(p2 * (p1 - p2));
  return Vector{{p1, p2, p3, s.uniform(0.0, 6.0), s.uniform(0.0, 2.0)}};
}

PropertyResult check_mass_symmetry(const ManipulatorModel& model, const ParamVector& theta,
                                   std::size_t draws, std::uint64_t seed) {
  PropertyResult r{"mass-symmetry", 0, 0, 0.0, 0.0};
  Sampler s(seed);
  for (std::size_t k = 0; k < draws; ++k) {
    const Matrix m = model.mass_matrix(theta, s.vector(model.dof(), -kPi, kPi));
    record(r, (m - m.transpose()).norm());
  }
  return r;
}

PropertyResult check_positive_definite(const ManipulatorModel& model, const ParamVector& theta) {
  PropertyResult r{"positive-definite", 0, 0, 0.0, 0.0};
  JointVector q = JointVector::Zero(model.dof());
  double lmin_all = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 360; ++k) {
    q(model.dof() - 1) = deg_to_rad(k);
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Matrix>(model.mass_matrix(theta, q), Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    lmin_all = std::min(lmin_all, lmin);
    ++r.draws;
    if (!(lmin > 0.0)) ++r.failures;
  }
  // Reported as a residual: the negated smallest eigenvalue must stay below 0.
  r.worst = -lmin_all;
  return r;
}

PropertyResult check_skew_symmetry(const ManipulatorModel& model, const ParamVector& theta,
                                   std::size_t draws, std::uint64_t seed, double tolerance) {
  PropertyResult r{"skew-symmetry", 0, 0, 0.0, tolerance};
  Sampler s(seed);
  const double h = 1e-6;
  const int n = model.dof();
  for (std::size_t k = 0; k < draws; ++k) {
    const JointVector q = s.vector(n, -kPi, kPi);
    const JointVector qd = s.vector(n, -2.0, 2.0);
    const Vector xi = s.vector(n, -1.0, 1.0);
    const Matrix m_dot =
        (model.mass_matrix(theta, q + h * qd) - model.mass_matrix(theta, q - h * qd)) / (2.0 * h);
    const Matrix n_mat = m_dot - 2.0 * model.coriolis_matrix(theta, q, qd);
    record(r, std::abs(xi.dot(n_mat * xi)) / xi.squaredNorm());
  }
  return r;
}

PropertyResult check_coriolis_switch(const ManipulatorModel& model, const ParamVector& theta,
                                     std::size_t draws, std::uint64_t seed, double tolerance) {
  PropertyResult r{"coriolis-switch", 0, 0, 0.0, tolerance};
  Sampler s(seed);
  const int n = model.dof();
  for (std::size_t k = 0; k < draws; ++k) {
    const JointVector xi = s.vector(n, -kPi, kPi);
    const JointVector nu = s.vector(n, -2.0, 2.0);
    const JointVector eta = s.vector(n, -2.0, 2.0);
    record(r, (model.coriolis_matrix(theta, xi, nu) * eta -
               model.coriolis_matrix(theta, xi, eta) * nu)
                  .norm());
  }
  return r;
}

PropertyResult check_regressor_identity(const ManipulatorModel& model, std::size_t draws,
                                        std::uint64_t seed, double tolerance) {
  PropertyResult r{"regressor-identity", 0, 0, 0.0, tolerance};
  Sampler s(seed);
  const int n = model.dof();
  for (std::size_t k = 0; k < draws; ++k) {
    const ParamVector theta(model, random_two_link_theta(seed * 7919 + k));
    const JointVector q = s.vector(n, -kPi, kPi);
    const JointVector qd = s.vector(n, -2.0, 2.0);
    const JointVector qdd = s.vector(n, -5.0, 5.0);
    const JointVector tau = inverse_dynamics(model, theta, q, qd, qdd);
    record(r, (model.regressor(q, qd, qdd) * theta.values() - tau).norm() / (1.0 + tau.norm()));
  }
  return r;
}

PropertyResult check_dynamics_round_trip(const ManipulatorModel& model, const ParamVector& theta,
                                         std::size_t draws, std::uint64_t seed,
                                         double tolerance) {
  PropertyResult r{"forward-inverse-round-trip", 0, 0, 0.0, tolerance};
  Sampler s(seed);
  const int n = model.dof();
  for (std::size_t k = 0; k < draws; ++k) {
    const JointVector q = s.vector(n, -kPi, kPi);
    const JointVector qd = s.vector(n, -2.0, 2.0);
    const JointVector a = s.vector(n, -5.0, 5.0);
    const JointVector tau = inverse_dynamics(model, theta, q, qd, a);
    record(r, (forward_dynamics(model, theta, q, qd, tau) - a).norm());
  }
  return r;
}

PropertyResult check_energy_conservation(const ManipulatorModel& model, const ParamVector& theta,
                                         std::size_t draws, std::uint64_t seed,
                                         double tolerance) {
  PropertyResult r{"energy-conservation", 0, 0, 0.0, tolerance};
  const int n = model.dof();
  Vector frictionless = theta.values();
  frictionless.tail(n).setZero();
  const ParamVector th(model, frictionless);
  const JointVector zero_tau = JointVector::Zero(n);
  const double dt = 1e-4;
  const int steps = 10000;

  auto rhs = [&](double, const Vector& x) {
    Vector dx(2 * n);
    dx << x.tail(n), forward_dynamics(model, th, x.head(n), x.tail(n), zero_tau);
    return dx;
  };

  Sampler s(seed);
  for (std::size_t k = 0; k < draws; ++k) {
    Vector x(2 * n);
    x << s.vector(n, -kPi, kPi), s.vector(n, -2.0, 2.0);
    const double e0 = kinetic_energy(model, th, x.head(n), x.tail(n));
    for (int i = 0; i < steps; ++i) x = rk4_step(rhs, i * dt, x, dt);
    const double e1 = kinetic_energy(model, th, x.head(n), x.tail(n));
    record(r, std::abs(e1 - e0) / e0);
  }
  return r;
}

PropertyResult check_regressor_rate(const ManipulatorModel& model,
                                    const TrajectoryDef& trajectory,
                                    const std::vector<double>& times, double tolerance) {
  PropertyResult r{"regressor-rate", 0, 0, 0.0, tolerance};
  const double h = 1e-6;
  for (double t : times) {
    const Matrix fd = (desired_regressor(model, trajectory.sample(t + h)) -
                       desired_regressor(model, trajectory.sample(t - h))) /
                      (2.0 * h);
    const Matrix exact = desired_regressor_rate(model, trajectory.sample(t));
    record(r, (fd - exact).cwiseAbs().maxCoeff());
  }
  return r;
}

PropertyResult check_barrier_monotonicity(const GainConfig& cfg, std::size_t samples) {
  PropertyResult r{"barrier-monotonicity", 0, 0, 0.0, 0.0};
  r.name += cfg.variant() == BarrierVariant::Logarithmic ? "-log" : "-tan";
  const int n = cfg.dof();
  for (int i = 0; i < n; ++i) {
    const double top = cfg.delta()(i) * (1.0 - 1e-6);
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
      JointVector e = JointVector::Zero(n);
      e(i) = top * static_cast<double>(k) / static_cast<double>(samples - 1);
      const double g = barrier_gain(e, cfg).diagonal()(i);
      // Residual: how far the sequence falls short of strictly increasing.
      record(r, k == 0 ? 0.0 : (g > prev ? 0.0 : prev - g + 1.0));
      prev = g;
    }
  }
  return r;
}

PropertyResult check_update_law_equivalence(const SimConfig& sim, double tolerance) {
  PropertyResult r{"update-law-equivalence", 0, 0, 0.0, tolerance};
  const Trace trace = run(sim);
  const UpdateLawCheck c = update_law_discrepancy(trace, *sim.model, sim.trajectory, sim.gains);
  record(r, c.max_relative_discrepancy);
  r.draws = trace.records.size();
  return r;
}

std::vector<PropertyResult> run_property_suite(const ManipulatorModel& model,
                                               const ParamVector& theta, const SimConfig& sim) {
  std::vector<PropertyResult> out;
  out.push_back(check_mass_symmetry(model, theta, 1000, 1));
  out.push_back(check_positive_definite(model, theta));
  out.push_back(check_skew_symmetry(model, theta, 1000, 2));
  out.push_back(check_coriolis_switch(model, theta, 1000, 3));
  out.push_back(check_regressor_identity(model, 1000, 4));
  out.push_back(check_dynamics_round_trip(model, theta, 1000, 5));
  out.push_back(check_energy_conservation(model, theta, 20, 6));
  out.push_back(check_regressor_rate(model, sim.trajectory, {1.0, 5.0, 10.0}));
  out.push_back(check_barrier_monotonicity(sim.gains.with_variant(BarrierVariant::Logarithmic), 1000));
  out.push_back(check_barrier_monotonicity(sim.gains.with_variant(BarrierVariant::Tangent), 1000));
  out.push_back(check_update_law_equivalence(sim));
  return out;
}

}  // namespace blf
