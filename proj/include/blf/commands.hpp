#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blf/lyapunov.hpp"
#include "blf/scenario.hpp"

namespace blf::cli {

/// Process exit codes; a stable contract for scripts.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kConstraintBreach = 3,
  kNumericalFailure = 4,
  kVerificationFailure = 5,
};

struct SimulateOptions {
  std::string config_path;
  std::optional<std::string> trace_path;    ///< overrides [output] trace_path
  std::optional<std::string> metrics_path;  ///< overrides [output] metrics_path
  bool no_saturation = false;
  double band_deg = 0.1;
};

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err);

struct CertifyOptions {
  std::string config_path;
  std::optional<double> m1, m2, zeta1, zeta2, kn;
  double envelope = 0.99;
  std::optional<std::string> kv_path;
};

int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string trace_path;
  std::string config_path;
  std::optional<std::string> kv_path;
  bool no_saturation = false;  ///< the trace came from `simulate --no-saturation`
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

struct SweepOptions {
  std::string config_path;
  std::string param;
  std::vector<double> values;
  std::optional<std::string> out_path;  ///< summary CSV; stdout when absent
  std::optional<double> horizon;
  bool no_saturation = false;
  double band_deg = 0.1;
};

/// One line of a sweep summary.
struct SweepRow {
  double value = 0.0;
  std::string outcome;  ///< ok | breach | nonfinite | rejected
  Vector max_abs_error;
  std::optional<double> settling_time;
  std::optional<SimState> final_state;
  std::string message;
};

/// Sweepable names: k<i>, K<i> (1-based joint index), dt, e0 (degrees,
/// applied to every joint). Throws UnknownParameter otherwise.
void apply_sweep_value(Scenario& sc, const std::string& param, double value);

/// Runs one simulation per value, concurrently; rows come back in input order.
std::vector<SweepRow> run_sweep(const Scenario& base, const std::string& param,
                                const std::vector<double>& values, double band);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, int n);

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);

int cmd_properties(std::ostream& out, std::ostream& err);
/// Same suite against an arbitrary model; used for negative controls.
int cmd_properties(const ManipulatorModel& model, const ParamVector& theta, std::ostream& out,
                   std::ostream& err);

void write_metrics(std::ostream& out, const RunMetrics& m, double band);

}  // namespace blf::cli
