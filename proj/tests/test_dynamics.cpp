#include <cmath>
#include <random>

#include "blf/dynamics.hpp"
#include "blf/errors.hpp"
#include "blf/integrator.hpp"
#include "blf/properties.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace blf;

namespace {

bool near(const Matrix& a, const Matrix& b, double tol) { return (a - b).cwiseAbs().maxCoeff() <= tol; }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("mass matrix closed form") {
    const TwoLinkPlanar model;
    // Indefinite for this theta, so only the formula is exercised.
    const auto th = ParamVector::unchecked(Vector{{1, 1, 1, 0, 0}});
    CHECK(near(model.mass_matrix(th, Vector{{0, 0}}), Matrix{{3, 2}, {2, 1}}, 0.0));

    const ParamVector th2(model, Vector{{3.5, 0.2, 0.25, 0, 0}});
    CHECK(near(model.mass_matrix(th2, Vector{{0, kPi / 2}}), Matrix{{3.5, 0.2}, {0.2, 0.2}}, 1e-15));
  }

  TEST_CASE("parameter validation rejects singular or indefinite inertia") {
    const TwoLinkPlanar model;
    CHECK_THROWS_AS(ParamVector(model, Vector{{1, 1, 0, 0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ParamVector(model, Vector{{1, 1, 1, 0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ParamVector(model, Vector{{1, 1, 0.25, 0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ParamVector(model, Vector{{3.5, 0.2, 0.25, -1, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ParamVector(model, Vector{{3.5, 0.2, 0.25, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ParamVector(model, Vector{{-3.5, 0.2, 0.25, 0, 0}}), InvalidArgument);
    CHECK_NOTHROW(ParamVector(model, TwoLinkPlanar::default_theta()));
  }

  TEST_CASE("coriolis matrix closed form") {
    const TwoLinkPlanar model;
    const auto th = ParamVector::unchecked(Vector{{2, 0.5, 1, 0, 0}});
    CHECK(near(model.coriolis_matrix(th, Vector{{0.3, -1.1}}, Vector{{0, 0}}), Matrix::Zero(2, 2), 0.0));
    CHECK(near(model.coriolis_matrix(th, Vector{{0, kPi / 2}}, Vector{{1, 1}}),
               Matrix{{-1, -2}, {1, 0}}, 1e-15));
    CHECK(near(model.coriolis_matrix(th, Vector{{0.7, 0.0}}, Vector{{2, -3}}), Matrix::Zero(2, 2), 0.0));
  }

  TEST_CASE("gravity vanishes for the horizontal arm") {
    const TwoLinkPlanar model;
    const auto th = test::default_theta();
    CHECK(model.gravity_vector(th, Vector{{0.2, 1.0}}).isZero(0.0));
    CHECK(model.gravity_vector(th, Vector{{kPi, kPi}}).isZero(0.0));
  }

  TEST_CASE("friction matrix reads out fd1, fd2") {
    const TwoLinkPlanar model;
    CHECK(near(Matrix(model.friction_matrix(test::default_theta())), Matrix{{5.3, 0}, {0, 1.1}}, 0.0));
    const ParamVector none(model, Vector{{3.5, 0.2, 0.25, 0, 0}});
    CHECK(Matrix(model.friction_matrix(none)).isZero(0.0));
    const ParamVector unit(model, Vector{{3.5, 0.2, 0.25, 1, 1}});
    CHECK(Matrix(model.friction_matrix(unit)).isIdentity(0.0));
  }

  TEST_CASE("regressor") {
    const TwoLinkPlanar model;
    CHECK(model.regressor(Vector{{0.4, -2.0}}, Vector{{0, 0}}, Vector{{0, 0}}).isZero(0.0));
    const Matrix y = model.regressor(Vector{{0, 0}}, Vector{{0, 0}}, Vector{{1, 0}});
    CHECK(near(y, Matrix{{1, 0, 2, 0, 0}, {0, 1, 1, 0, 0}}, 0.0));

    // Y theta == inverse_dynamics over random theta and states.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 200; ++k) {
      const ParamVector th(model, random_two_link_theta(1000 + k));
      const Vector q{{u(rng), u(rng)}}, qd{{u(rng), u(rng)}}, qdd{{u(rng), u(rng)}};
      const Vector tau = inverse_dynamics(model, th, q, qd, qdd);
      CHECK((model.regressor(q, qd, qdd) * th.values() - tau).norm() <= 1e-10 * (1 + tau.norm()));
    }
  }

  TEST_CASE("desired regressor equals regressor at desired states") {
    const TwoLinkPlanar model;
    const TrajectoryDef traj{Vector{{0.7, 1.2}}, 1.0, 0.3};
    for (int k = 0; k < 100; ++k) {
      const TrajectorySample s = traj.sample(0.37 * k);
      CHECK(desired_regressor(model, s) == model.regressor(s.q, s.qdot, s.qddot));
    }
    TrajectorySample still = traj.sample(2.0);
    still.qdot.setZero();
    still.qddot.setZero();
    CHECK(desired_regressor(model, still).isZero(0.0));
    CHECK(desired_regressor(model, traj.sample(0.0)).isZero(0.0));
  }

  TEST_CASE("desired regressor rate matches central differences") {
    const TwoLinkPlanar model;
    const TrajectoryDef traj{Vector{{0.7, 1.2}}, 1.0, 0.3};
    const double h = 1e-6;
    for (double t : {1.0, 5.0, 10.0}) {
      const Matrix fd =
          (desired_regressor(model, traj.sample(t + h)) - desired_regressor(model, traj.sample(t - h))) /
          (2 * h);
      CHECK(near(fd, desired_regressor_rate(model, traj.sample(t)), 1e-6));
    }
    CHECK(desired_regressor_rate(model, traj.sample(0.0)).isZero(0.0));
    const TrajectoryDef flat{Vector{{0.0, 0.0}}, 1.0, 0.3};
    CHECK(desired_regressor_rate(model, flat.sample(3.0)).isZero(0.0));
  }

  TEST_CASE("trajectory derivatives are consistent and start at rest") {
    const TrajectoryDef traj{Vector{{0.7, 1.2}}, 1.3, 0.3};
    const TrajectorySample s0 = traj.sample(0.0);
    CHECK(s0.q.isZero(0.0));
    CHECK(s0.qdot.isZero(0.0));
    CHECK(s0.qddot.isZero(0.0));
    CHECK(s0.qdddot.isZero(0.0));
    const double h = 1e-5;
    for (double t : {0.3, 1.0, 2.5, 7.0}) {
      const auto a = traj.sample(t - h), b = traj.sample(t + h), s = traj.sample(t);
      CHECK(((b.q - a.q) / (2 * h) - s.qdot).norm() < 1e-8);
      CHECK(((b.qdot - a.qdot) / (2 * h) - s.qddot).norm() < 1e-8);
      CHECK(((b.qddot - a.qddot) / (2 * h) - s.qdddot).norm() < 1e-7);
    }
  }

  TEST_CASE("forward dynamics") {
    const TwoLinkPlanar model;
    const auto th = test::default_theta();
    CHECK(forward_dynamics(model, th, Vector{{0.3, 0.9}}, Vector{{0, 0}}, Vector{{0, 0}}).isZero(0.0));

    // M = [[1.5, 1.25], [1.25, 1]] at q = 0; solved by hand: [-16, 20].
    const auto ind = ParamVector::unchecked(Vector{{1, 1, 0.25, 0, 0}});
    const Vector a = forward_dynamics(model, ind, Vector{{0, 0}}, Vector{{0, 0}}, Vector{{1, 0}});
    CHECK(a(0) == doctest::Approx(-16.0).epsilon(1e-12));
    CHECK(a(1) == doctest::Approx(20.0).epsilon(1e-12));

    const auto singular = ParamVector::unchecked(Vector{{1, 1, 0, 0, 0}});
    CHECK_THROWS_AS(forward_dynamics(model, singular, Vector{{0, 0}}, Vector{{0, 0}}, Vector{{1, 0}}),
                    SingularMass);
  }

  TEST_CASE("inverse dynamics of zero motion is zero torque") {
    const TwoLinkPlanar model;
    CHECK(inverse_dynamics(model, test::default_theta(), Vector{{1, 2}}, Vector{{0, 0}}, Vector{{0, 0}})
              .isZero(0.0));
  }

  TEST_CASE("inertia bounds bracket the grid eigenvalues") {
    const TwoLinkPlanar model;
    const auto th = test::default_theta();
    const InertiaBounds b = model.inertia_bounds(th);
    CHECK(b.m1 > 0.0);
    CHECK(b.m2 >= b.m1);
    // q2 = 0 and q2 = pi are on the grid; eigenvalues there must lie inside.
    for (double q2 : {0.0, kPi}) {
      const Vector ev =
          Eigen::SelfAdjointEigenSolver<Matrix>(model.mass_matrix(th, Vector{{0, q2}})).eigenvalues();
      CHECK(ev.minCoeff() >= b.m1 - 1e-15);
      CHECK(ev.maxCoeff() <= b.m2 + 1e-15);
    }
  }

  TEST_CASE("structural properties on the default arm") {
    const TwoLinkPlanar model;
    const auto th = test::default_theta();
    CHECK(check_mass_symmetry(model, th, 1000, 1).passed());
    CHECK(check_positive_definite(model, th).passed());
    const auto skew = check_skew_symmetry(model, th, 1000, 2);
    CHECK_MESSAGE(skew.passed(), "worst " << skew.worst);
    CHECK(check_coriolis_switch(model, th, 1000, 3).passed());
    CHECK(check_regressor_identity(model, 1000, 4).passed());
    CHECK(check_dynamics_round_trip(model, th, 1000, 5).passed());
  }

  TEST_CASE("kinetic energy is conserved without friction and torque") {
    const TwoLinkPlanar model;
    const auto r = check_energy_conservation(model, test::default_theta(), 5, 6);
    CHECK_MESSAGE(r.passed(), "worst " << r.worst);
  }
}
