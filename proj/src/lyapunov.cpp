#include "blf/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blf/errors.hpp"

namespace blf {

double barrier_potential(const JointVector& e, const GainConfig& cfg) {
  const Vector& delta = cfg.delta();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (!(std::abs(e(i)) < delta(i) * (1.0 - kBarrierGuard))) {
      throw ConstraintBreach("barrier potential evaluated outside the constraint region",
                             static_cast<int>(i), std::numeric_limits<double>::quiet_NaN());
    }
    const double d2 = delta(i) * delta(i);
    const double ratio = e(i) * e(i) / d2;
    if (cfg.variant() == BarrierVariant::Logarithmic) {
      // ln(d2 / (d2 - e2)) = -log1p(-e2/d2); log1p keeps precision near e = 0.
      sum += 0.5 * cfg.K()(i) * -std::log1p(-ratio);
    } else {
      sum += d2 / kPi * std::tan(0.5 * kPi * ratio);
    }
  }
  return sum;
}

double blf_value(const JointVector& e, const JointVector& e_f, const JointVector& eta,
                 const Vector& theta_tilde, const Matrix& M_at_q, const GainConfig& cfg) {
  const double kinetic = 0.5 * eta.dot(M_at_q * eta);
  const double filter = 0.5 * e_f.squaredNorm();
  const double adapt = 0.5 * theta_tilde.cwiseQuotient(cfg.gamma()).dot(theta_tilde);
  return kinetic + filter + barrier_potential(e, cfg) + adapt;
}

LambdaBounds lambda_bounds(const GainConfig& cfg, double m1, double m2, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("envelope rho must lie in (0, 1)");
  if (!(m1 > 0.0 && m2 >= m1)) throw InvalidArgument("inertia bounds need 0 < m1 <= m2");
  LambdaBounds lb;
  lb.envelope = rho;
  const Vector gamma_inv = cfg.gamma().cwiseInverse();
  const double d2max = cfg.delta().array().square().maxCoeff();

  // The tangent barrier term is bounded below by e_i^2 / 2, so its quadratic
  // coefficient plays the role of min K_i / max Delta_i^2 = 1.
  const double barrier_coeff = cfg.variant() == BarrierVariant::Logarithmic
                                   ? cfg.K().minCoeff() / d2max
                                   : 1.0;
  lb.lambda1 = 0.5 * std::min({m1, 1.0, barrier_coeff, gamma_inv.minCoeff()});

  const JointVector e_env = rho * cfg.delta();
  lb.max_barrier_gain = barrier_gain(e_env, cfg).diagonal().maxCoeff();
  lb.lambda2 = 0.5 * std::max({m2, 1.0, lb.max_barrier_gain, gamma_inv.maxCoeff()});
  return lb;
}

double initial_z_norm(const SimConfig& cfg) {
  const SimState s0 = initial_state(cfg);
  const TrajectorySample d0 = cfg.trajectory.sample(0.0);
  const JointVector e = tracking_error(d0.q, s0.q());
  const JointVector e_f = filter_output(e, s0.w(), cfg.gains);
  const JointVector eta = compute_eta(s0, cfg);
  const Vector theta_tilde = cfg.theta_true.values() - cfg.theta_hat0;
  return std::sqrt(eta.squaredNorm() + e_f.squaredNorm() + e.squaredNorm() +
                   theta_tilde.squaredNorm());
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::NotChecked: return "NOT-CHECKED";
  }
  return "?";
}

bool CertificationReport::checked_conditions_pass() const {
  return std::none_of(items.begin(), items.end(),
                      [](const CertificationItem& c) { return c.status == CheckStatus::Fail; });
}

const CertificationItem* CertificationReport::find(const std::string& name) const {
  for (const auto& item : items) {
    if (item.name == name) return &item;
  }
  return nullptr;
}

CertificationReport certify_gains(const GainConfig& cfg, const AnalysisBounds& bounds) {
  CertificationReport report;
  report.bounds = bounds;
  report.lambdas = lambda_bounds(cfg, bounds.m1, bounds.m2, bounds.envelope);

  {
    CertificationItem c;
    c.name = "K-condition";
    c.lhs = cfg.K().minCoeff();
    c.relation = ">=";
    c.rhs = cfg.delta().array().square().maxCoeff();
    c.status = c.lhs >= c.rhs ? CheckStatus::Pass : CheckStatus::Fail;
    c.note = "min K_i >= max Delta_i^2";
    if (cfg.variant() == BarrierVariant::Tangent) c.note += " (not used by the tangent barrier)";
    report.items.push_back(c);
  }
  {
    CertificationItem c;
    c.name = "k-design";
    c.lhs = cfg.k().minCoeff();
    c.relation = ">=";
    c.note = "min k_i >= (1/m1)(1 + zeta1^2 kn + zeta2^2 kn)";
    if (bounds.zeta1 && bounds.zeta2 && bounds.kn) {
      c.rhs = (1.0 + (*bounds.zeta1 * *bounds.zeta1 + *bounds.zeta2 * *bounds.zeta2) * *bounds.kn) /
              bounds.m1;
      c.status = c.lhs >= c.rhs ? CheckStatus::Pass : CheckStatus::Fail;
    } else {
      c.rhs = std::numeric_limits<double>::quiet_NaN();
      c.note += "; needs zeta1, zeta2, kn";
    }
    report.items.push_back(c);
  }
  {
    CertificationItem c;
    c.name = "kn-bound";
    c.relation = ">";
    c.rhs = 1.0 + report.lambdas.lambda2 / report.lambdas.lambda1 * bounds.z0_norm * bounds.z0_norm;
    c.note = "kn > 1 + (lambda2/lambda1) ||z(0)||^2";
    if (bounds.kn) {
      c.lhs = *bounds.kn;
      c.status = c.lhs > c.rhs ? CheckStatus::Pass : CheckStatus::Fail;
    } else {
      c.lhs = std::numeric_limits<double>::quiet_NaN();
      c.note += "; needs kn";
    }
    report.items.push_back(c);
  }
  return report;
}

DecreaseReport verify_decrease(const Trace& trace, const GainConfig& cfg,
                               double relative_tolerance) {
  DecreaseReport r;
  r.saturated = trace.saturated;
  r.conditions_met = cfg.variant() == BarrierVariant::Tangent || cfg.k_condition_holds();
  const auto& rec = trace.records;
  if (rec.empty()) return r;
  r.V0 = rec.front().V;
  r.V_final = rec.back().V;
  r.tolerance = relative_tolerance * (1.0 + r.V0);
  r.max_increase = -std::numeric_limits<double>::infinity();
  if (rec.size() < 2) {
    r.max_increase = 0.0;
    return r;
  }
  r.steps = rec.size() - 1;

  // Regress -dV/dt on ||x||^2 through the origin, and correlate dV/dt with -||x||^2.
  double sxy = 0.0, sxx = 0.0;
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
    const double dV = rec[i + 1].V - rec[i].V;
    if (dV > r.max_increase) r.max_increase = dV;
    if (dV > r.tolerance) {
      ++r.increases;
      if (!r.first_increase) r.first_increase = i;
    }
    const double h = rec[i + 1].t - rec[i].t;
    const double vdot = dV / h;
    auto xsq = [](const TraceRecord& x) {
      return x.eta.squaredNorm() + x.e_f.squaredNorm() + x.e.squaredNorm();
    };
    const double x2 = 0.5 * (xsq(rec[i]) + xsq(rec[i + 1]));
    sxy += -vdot * x2;
    sxx += x2 * x2;
    const double a = vdot, b = -x2;
    sa += a; sb += b; saa += a * a; sbb += b * b; sab += a * b;
  }
  const double m = static_cast<double>(r.steps);
  r.beta_fit = sxx > 0.0 ? sxy / sxx : 0.0;
  const double cov = sab / m - (sa / m) * (sb / m);
  const double va = saa / m - (sa / m) * (sa / m);
  const double vb = sbb / m - (sb / m) * (sb / m);
  r.correlation = (va > 0.0 && vb > 0.0) ? cov / std::sqrt(va * vb) : 0.0;
  return r;
}

ConstraintReport check_constraints(const Trace& trace, const Vector& delta) {
  ConstraintReport r;
  r.max_ratio = Vector::Zero(delta.size());
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const JointVector& e = trace.records[k].e;
    bool bad = false;
    for (Eigen::Index i = 0; i < delta.size(); ++i) {
      const double ratio = std::abs(e(i)) / delta(i);
      r.max_ratio(i) = std::max(r.max_ratio(i), ratio);
      if (!(ratio < 1.0)) {
        if (!bad && !r.first_violation) {
          r.first_violation = k;
          r.first_joint = static_cast<int>(i);
        }
        bad = true;
      }
    }
    if (bad) ++r.violations;
  }
  return r;
}

RunMetrics run_metrics(const Trace& trace, double band, double tail_fraction) {
  RunMetrics m;
  const auto& rec = trace.records;
  if (rec.empty()) return m;
  const Eigen::Index n = rec.front().e.size();
  const Eigen::Index p = rec.front().theta_hat.size();
  const double t0 = rec.front().t;
  const double t_end = rec.back().t;
  m.tail_start = t_end - tail_fraction * (t_end - t0);

  m.max_abs_error = Vector::Zero(n);
  m.steady_state_max_error = Vector::Zero(n);
  m.max_abs_tau = Vector::Zero(n);
  for (const auto& r : rec) {
    m.max_abs_error = m.max_abs_error.cwiseMax(r.e.cwiseAbs());
    m.max_abs_tau = m.max_abs_tau.cwiseMax(r.tau.cwiseAbs());
    if (r.t >= m.tail_start) {
      m.steady_state_max_error = m.steady_state_max_error.cwiseMax(r.e.cwiseAbs());
    }
  }

  // Settling: the record after the last one that is out of band.
  std::optional<std::size_t> last_out;
  for (std::size_t k = rec.size(); k-- > 0;) {
    if (rec[k].e.cwiseAbs().maxCoeff() > band) {
      last_out = k;
      break;
    }
  }
  if (!last_out) {
    m.settling_time = t0;
  } else if (*last_out + 1 < rec.size()) {
    m.settling_time = rec[*last_out + 1].t;
  }

  m.theta_hat_final = rec.back().theta_hat;
  m.theta_hat_drift = Vector::Zero(p);
  double st = 0.0, stt = 0.0, count = 0.0;
  Vector sy = Vector::Zero(p), sty = Vector::Zero(p);
  for (const auto& r : rec) {
    if (r.t < m.tail_start) continue;
    st += r.t;
    stt += r.t * r.t;
    sy += r.theta_hat;
    sty += r.t * r.theta_hat;
    count += 1.0;
  }
  const double denom = count * stt - st * st;
  if (count >= 2.0 && denom > 0.0) {
    m.theta_hat_drift = ((count * sty - st * sy) / denom).cwiseAbs();
  }
  return m;
}

UpdateLawCheck update_law_discrepancy(const Trace& trace, const ManipulatorModel& model,
                                      const TrajectoryDef& trajectory, const GainConfig& cfg) {
  UpdateLawCheck out;
  const auto& rec = trace.records;
  for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
    const Vector fd =
        (rec[i + 1].theta_hat - rec[i - 1].theta_hat) / (rec[i + 1].t - rec[i - 1].t);
    const Matrix Yd = desired_regressor(model, trajectory.sample(rec[i].t));
    const Vector oracle = oracle_theta_rate(Yd, rec[i].eta, cfg);
    const double rel = (fd - oracle).norm() / (1.0 + oracle.norm());
    if (rel > out.max_relative_discrepancy) {
      out.max_relative_discrepancy = rel;
      out.at_time = rec[i].t;
    }
  }
  return out;
}

}  // namespace blf
