#include "blf/trajectory.hpp"

#include <cmath>

namespace blf {

TrajectorySample TrajectoryDef::sample(double t) const {
  // Product rule on f(t) = sin(wt) and g(t) = 1 - exp(-a t^3).
  const double w = omega;
  const double a = alpha;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  const double f0 = s;
  const double f1 = w * c;
  const double f2 = -w * w * s;
  const double f3 = -w * w * w * c;

  const double t2 = t * t;
  const double t3 = t2 * t;
  const double ex = std::exp(-a * t3);
  const double g0 = 1.0 - ex;
  const double g1 = 3.0 * a * t2 * ex;
  const double g2 = (6.0 * a * t - 9.0 * a * a * t2 * t2) * ex;
  const double g3 = (6.0 * a - 54.0 * a * a * t3 + 27.0 * a * a * a * t3 * t3) * ex;

  const double h0 = f0 * g0;
  const double h1 = f1 * g0 + f0 * g1;
  const double h2 = f2 * g0 + 2.0 * f1 * g1 + f0 * g2;
  const double h3 = f3 * g0 + 3.0 * f2 * g1 + 3.0 * f1 * g2 + f0 * g3;

  TrajectorySample out;
  out.t = t;
  out.q = amplitude * h0;
  out.qdot = amplitude * h1;
  out.qddot = amplitude * h2;
  out.qdddot = amplitude * h3;
  return out;
}

}  // namespace blf
