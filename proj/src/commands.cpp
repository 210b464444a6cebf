#include "blf/commands.hpp"

#include <fstream>
#include <future>
#include <sstream>

#include "blf/errors.hpp"
#include "blf/properties.hpp"
#include "blf/trace_csv.hpp"

namespace blf::cli {
namespace {

std::string num(double v) { return format_number(v); }

std::string join(const Vector& v, double scale = 1.0) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += num(v(i) * scale);
  }
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw Error("failed writing '" + path + "'");
}

/// Maps an exception escaping a command onto the exit-code contract.
int report_error(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigParse& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const TraceParse& e) {
    err << "trace error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnknownParameter& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConstraintBreach& e) {
    err << "constraint breach: joint " << e.joint() + 1 << " at t = " << num(e.time())
        << " s: " << e.what() << '\n';
    return kConstraintBreach;
  } catch (const NonFinite& e) {
    err << "numerical failure at t = " << num(e.time()) << " s: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const SingularMass& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace

void write_metrics(std::ostream& out, const RunMetrics& m, double band) {
  const double to_deg = 180.0 / kPi;
  out << "band_deg=" << num(band * to_deg) << '\n';
  for (Eigen::Index i = 0; i < m.max_abs_error.size(); ++i) {
    out << "max_abs_error_deg_" << i + 1 << '=' << num(m.max_abs_error(i) * to_deg) << '\n';
  }
  out << "settling_time_s=" << (m.settling_time ? num(*m.settling_time) : "none") << '\n';
  out << "tail_start_s=" << num(m.tail_start) << '\n';
  for (Eigen::Index i = 0; i < m.steady_state_max_error.size(); ++i) {
    out << "steady_state_max_error_deg_" << i + 1 << '='
        << num(m.steady_state_max_error(i) * to_deg) << '\n';
  }
  for (Eigen::Index i = 0; i < m.max_abs_tau.size(); ++i) {
    out << "max_abs_tau_" << i + 1 << '=' << num(m.max_abs_tau(i)) << '\n';
  }
  for (Eigen::Index i = 0; i < m.theta_hat_final.size(); ++i) {
    out << "theta_hat_final_" << i + 1 << '=' << num(m.theta_hat_final(i)) << '\n';
  }
  for (Eigen::Index i = 0; i < m.theta_hat_drift.size(); ++i) {
    out << "theta_hat_drift_per_s_" << i + 1 << '=' << num(m.theta_hat_drift(i)) << '\n';
  }
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Scenario sc = load_scenario(opt.config_path);
    if (opt.no_saturation) sc.sim.gains = sc.sim.gains.with_tau_max(std::nullopt);
    const std::string trace_path = opt.trace_path.value_or(sc.trace_path);
    const std::string metrics_path = opt.metrics_path.value_or(sc.metrics_path);

    const Trace trace = run(sc.sim);
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    write_file(trace_path, csv.str());

    const double band = deg_to_rad(opt.band_deg);
    const RunMetrics m = run_metrics(trace, band);
    std::ostringstream kv;
    write_metrics(kv, m, band);
    write_file(metrics_path, kv.str());

    out << "simulated " << num(sc.sim.horizon) << " s in " << trace.records.size()
        << " records (dt = " << num(sc.sim.dt) << " s)\n";
    out << "max |e| [deg]: " << join(m.max_abs_error, 180.0 / kPi) << '\n';
    out << "steady-state max |e| over t >= " << num(m.tail_start)
        << " s [deg]: " << join(m.steady_state_max_error, 180.0 / kPi) << '\n';
    out << "settling time into +/-" << num(opt.band_deg) << " deg: "
        << (m.settling_time ? num(*m.settling_time) + " s" : std::string("never")) << '\n';
    out << "max |tau| [N m]: " << join(m.max_abs_tau) << '\n';
    out << "theta_hat final: " << join(m.theta_hat_final) << '\n';
    out << "trace: " << trace_path << "\nmetrics: " << metrics_path << '\n';
    return kOk;
  } catch (...) {
    return report_error(err);
  }
}

int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario(opt.config_path);
    const InertiaBounds grid = sc.sim.model->inertia_bounds(sc.sim.theta_true);
    AnalysisBounds b;
    b.m1 = opt.m1.value_or(grid.m1);
    b.m2 = opt.m2.value_or(grid.m2);
    if (!(b.m1 > 0.0) || b.m2 < b.m1) throw ConfigParse("need 0 < m1 <= m2");
    for (const auto& c : {opt.zeta1, opt.zeta2}) {
      if (c && *c < 0.0) throw ConfigParse("zeta constants must be non-negative");
    }
    if (opt.kn && !(*opt.kn > 0.0)) throw ConfigParse("kn must be positive");
    if (!(opt.envelope > 0.0 && opt.envelope < 1.0)) throw ConfigParse("envelope must be in (0, 1)");
    b.zeta1 = opt.zeta1;
    b.zeta2 = opt.zeta2;
    b.kn = opt.kn;
    b.envelope = opt.envelope;
    b.z0_norm = initial_z_norm(sc.sim);

    const CertificationReport rep = certify_gains(sc.sim.gains, b);
    out << "m1 = " << num(b.m1) << (opt.m1 ? "" : " (grid search)") << '\n';
    out << "m2 = " << num(b.m2) << (opt.m2 ? "" : " (grid search)") << '\n';
    out << "lambda1 = " << num(rep.lambdas.lambda1) << '\n';
    out << "lambda2 = " << num(rep.lambdas.lambda2) << " (|e_i| <= " << num(rep.lambdas.envelope)
        << " Delta_i, max K_e = " << num(rep.lambdas.max_barrier_gain) << ")\n";
    out << "||z(0)|| = " << num(b.z0_norm) << '\n';
    for (const auto& c : rep.items) {
      out << c.name << ": " << to_string(c.status);
      if (c.status != CheckStatus::NotChecked) {
        out << "  " << num(c.lhs) << ' ' << c.relation << ' ' << num(c.rhs);
      }
      out << "  [" << c.note << "]\n";
    }
    if (const auto* kd = rep.find("k-design"); kd && kd->status != CheckStatus::NotChecked) {
      out << "required k = " << num(kd->rhs) << '\n';
    }

    if (opt.kv_path) {
      std::ostringstream kv;
      kv << "m1=" << num(b.m1) << "\nm2=" << num(b.m2) << "\nlambda1=" << num(rep.lambdas.lambda1)
         << "\nlambda2=" << num(rep.lambdas.lambda2) << "\nenvelope=" << num(rep.lambdas.envelope)
         << "\nz0_norm=" << num(b.z0_norm) << '\n';
      for (const auto& c : rep.items) {
        kv << c.name << ".status=" << to_string(c.status) << '\n'
           << c.name << ".lhs=" << num(c.lhs) << '\n'
           << c.name << ".rhs=" << num(c.rhs) << '\n';
      }
      write_file(*opt.kv_path, kv.str());
    }
    return rep.checked_conditions_pass() ? kOk : kVerificationFailure;
  } catch (...) {
    return report_error(err);
  }
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario(opt.config_path);
    std::ifstream in(opt.trace_path);
    if (!in) throw TraceParse(opt.trace_path + ": cannot open file");
    Trace trace = read_trace_csv(in, opt.trace_path);
    trace.saturated = sc.sim.gains.tau_max().has_value() && !opt.no_saturation;

    if (trace.saturated) {
      err << "warning: the scenario enables torque saturation; the decrease check assumes an "
             "unsaturated loop\n";
    }
    const DecreaseReport d = verify_decrease(trace, sc.sim.gains);
    const ConstraintReport c = check_constraints(trace, sc.sim.gains.delta());
    if (!d.conditions_met) err << "warning: gain condition min K_i >= max Delta_i^2 is not met\n";

    out << "records: " << trace.records.size() << '\n';
    out << "V(0) = " << num(d.V0) << ", V(end) = " << num(d.V_final) << '\n';
    out << "V increases above " << num(d.tolerance) << ": " << d.increases;
    if (d.first_increase) {
      out << " (first at t = " << num(trace.records[*d.first_increase].t)
          << " s, data row " << *d.first_increase + 1 << ")";
    }
    out << ", largest step change " << num(d.max_increase) << '\n';
    out << "fitted beta = " << num(d.beta_fit) << ", corr(dV/dt, -||x||^2) = "
        << num(d.correlation) << '\n';
    out << "constraint violations: " << c.violations;
    if (c.first_violation) {
      out << " (first at data row " << *c.first_violation + 1 << ", joint "
          << *c.first_joint + 1 << ")";
    }
    out << "\nmax |e_i|/Delta_i: " << join(c.max_ratio) << '\n';

    if (opt.kv_path) {
      std::ostringstream kv;
      kv << "records=" << trace.records.size() << "\nV0=" << num(d.V0)
         << "\nV_final=" << num(d.V_final) << "\ntolerance=" << num(d.tolerance)
         << "\nincreases=" << d.increases << "\nmax_increase=" << num(d.max_increase)
         << "\nbeta_fit=" << num(d.beta_fit) << "\ncorrelation=" << num(d.correlation)
         << "\nconstraint_violations=" << c.violations
         << "\nsaturated=" << (trace.saturated ? 1 : 0) << '\n';
      write_file(*opt.kv_path, kv.str());
    }
    const bool ok = d.increases == 0 && c.violations == 0;
    out << (ok ? "VERIFIED" : "NOT VERIFIED") << '\n';
    return ok ? kOk : kVerificationFailure;
  } catch (...) {
    return report_error(err);
  }
}

namespace {

/// Joint index addressed by a k<i>/K<i> name, or -1.
int swept_joint(const std::string& param, int n) {
  if (param.size() < 2 || (param[0] != 'k' && param[0] != 'K')) return -1;
  const std::string rest = param.substr(1);
  if (rest.find_first_not_of("0123456789") != std::string::npos || rest.size() > 3) return -1;
  const int i = std::stoi(rest) - 1;
  return (i >= 0 && i < n) ? i : -1;
}

void require_sweepable(const std::string& param, int n) {
  if (param == "dt" || param == "e0" || swept_joint(param, n) >= 0) return;
  throw UnknownParameter("cannot sweep '" + param + "'; expected one of k1..k" +
                         std::to_string(n) + ", K1..K" + std::to_string(n) + ", dt, e0");
}

}  // namespace

void apply_sweep_value(Scenario& sc, const std::string& param, double value) {
  const int n = sc.sim.dof();
  require_sweepable(param, n);
  if (param == "dt") {
    sc.sim.dt = value;
  } else if (param == "e0") {
    sc.e0 = Vector::Constant(n, deg_to_rad(value));
  } else {
    const GainConfig& g = sc.sim.gains;
    Vector k = g.k(), K = g.K();
    (param[0] == 'k' ? k : K)(swept_joint(param, n)) = value;
    sc.sim.gains = GainConfig(k, K, g.delta(), g.gamma(), g.variant(), g.tau_max());
  }
  refresh_initial_state(sc);
}

std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& param,
                                const std::vector<double>& values, double band) {
  require_sweepable(param, base.sim.dof());

  auto one = [&base, &param, band](double value) {
    SweepRow row;
    row.value = value;
    Scenario sc = base;
    try {
      apply_sweep_value(sc, param, value);
    } catch (const Error& e) {
      row.outcome = "rejected";
      row.message = e.what();
      return row;
    }
    try {
      const Trace trace = run(sc.sim);
      const RunMetrics m = run_metrics(trace, band);
      row.outcome = "ok";
      row.max_abs_error = m.max_abs_error;
      row.settling_time = m.settling_time;
      row.final_state = trace.final_state;
    } catch (const ConstraintBreach& e) {
      row.outcome = "breach";
      row.message = e.what();
    } catch (const Error& e) {
      row.outcome = "nonfinite";
      row.message = e.what();
    }
    return row;
  };

  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(values.size());
  for (double v : values) jobs.push_back(std::async(std::launch::async, one, v));
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int n) {
  out << "value,outcome,max_abs_e_deg";
  for (int i = 1; i <= n; ++i) out << ",max_abs_e" << i << "_deg";
  out << ",settling_time_s";
  for (int i = 1; i <= n; ++i) out << ",q" << i << "_final";
  for (int i = 1; i <= n; ++i) out << ",qdot" << i << "_final";
  out << '\n';
  for (const auto& r : rows) {
    out << num(r.value) << ',' << r.outcome << ',';
    if (r.outcome == "ok") {
      out << num(rad_to_deg(r.max_abs_error.maxCoeff()));
      for (int i = 0; i < n; ++i) out << ',' << num(rad_to_deg(r.max_abs_error(i)));
      out << ',' << (r.settling_time ? num(*r.settling_time) : "none");
      for (int i = 0; i < n; ++i) out << ',' << num(r.final_state->q()(i));
      for (int i = 0; i < n; ++i) out << ',' << num(r.final_state->qdot()(i));
    } else {
      out << "nan";
      for (int i = 0; i < 3 * n + 1; ++i) out << (i == n ? ",none" : ",nan");
    }
    out << '\n';
  }
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    Scenario sc = load_scenario(opt.config_path);
    if (opt.no_saturation) sc.sim.gains = sc.sim.gains.with_tau_max(std::nullopt);
    if (opt.horizon) {
      sc.sim.horizon = *opt.horizon;
      try {
        sc.sim.validate();
      } catch (const InvalidArgument& e) {
        throw ConfigParse(std::string("--horizon: ") + e.what());
      }
    }
    const auto rows = run_sweep(sc, opt.param, opt.values, deg_to_rad(opt.band_deg));
    std::ostringstream csv;
    write_sweep_csv(csv, rows, sc.sim.dof());
    if (opt.out_path) {
      write_file(*opt.out_path, csv.str());
    } else {
      out << csv.str();
    }
    for (const auto& r : rows) {
      if (!r.message.empty()) err << opt.param << " = " << num(r.value) << ": " << r.message << '\n';
    }
    return kOk;
  } catch (...) {
    return report_error(err);
  }
}

int cmd_properties(const ManipulatorModel& model, const ParamVector& theta, std::ostream& out,
                   std::ostream& err) {
  try {
    Scenario sc = reference_scenario();
    sc.sim.horizon = 10.0;
    const auto results = run_property_suite(model, theta, sc.sim);
    std::size_t passed = 0;
    for (const auto& r : results) {
      if (r.passed()) ++passed;
      out << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.draws << " draws, "
          << r.failures << " failures, worst residual " << num(r.worst) << " (tolerance "
          << num(r.tolerance) << ")\n";
    }
    out << passed << '/' << results.size() << " properties passed\n";
    return passed == results.size() ? kOk : kVerificationFailure;
  } catch (...) {
    return report_error(err);
  }
}

int cmd_properties(std::ostream& out, std::ostream& err) {
  const TwoLinkPlanar model;
  return cmd_properties(model, ParamVector(model, TwoLinkPlanar::default_theta()), out, err);
}

}  // namespace blf::cli
