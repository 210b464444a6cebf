// Command-line front end: simulate, certify, verify, sweep, properties.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blf/commands.hpp"

namespace {

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::stod(cur));
    cur.clear();
  };
  for (char c : list) {
    if (c == ',' || c == ' ') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

template <class T>
void optional_option(CLI::App* app, const std::string& name, std::optional<T>& target,
                     const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = blf::cli;
  CLI::App app{"Barrier-constrained adaptive output-feedback controller: simulation and analysis"};
  app.require_subcommand(1);

  cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run a scenario, write the trace CSV and metrics");
  simulate->add_option("config", sim.config_path, "scenario file")->required();
  optional_option(simulate, "--trace", sim.trace_path, "trace CSV path (overrides the config)");
  optional_option(simulate, "--metrics", sim.metrics_path, "metrics path (overrides the config)");
  simulate->add_flag("--no-saturation", sim.no_saturation, "disable the torque limit");
  simulate->add_option("--band-deg", sim.band_deg, "settling band in degrees")->capture_default_str();

  cli::CertifyOptions cert;
  auto* certify = app.add_subcommand("certify", "check the stability gain conditions");
  certify->add_option("config", cert.config_path, "scenario file")->required();
  optional_option(certify, "--m1", cert.m1, "lower inertia bound (default: grid search)");
  optional_option(certify, "--m2", cert.m2, "upper inertia bound (default: grid search)");
  optional_option(certify, "--zeta1", cert.zeta1, "linear bounding constant");
  optional_option(certify, "--zeta2", cert.zeta2, "quadratic bounding constant");
  optional_option(certify, "--kn", cert.kn, "nonlinear damping gain");
  certify->add_option("--envelope", cert.envelope, "error envelope rho for lambda2 (|e_i| <= rho Delta_i)")
      ->capture_default_str();
  optional_option(certify, "--kv", cert.kv_path, "also write key=value report here");

  cli::VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "check V decrease and constraint invariance on a trace");
  verify->add_option("trace", ver.trace_path, "trace CSV")->required();
  verify->add_option("config", ver.config_path, "scenario file")->required();
  verify->add_flag("--no-saturation", ver.no_saturation, "trace was produced without torque limit");
  optional_option(verify, "--kv", ver.kv_path, "also write key=value report here");

  cli::SweepOptions sw;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "run one simulation per parameter value");
  sweep->add_option("config", sw.config_path, "scenario file")->required();
  sweep->add_option("--param", sw.param, "k<i>, K<i>, dt or e0 (degrees)")->required();
  sweep->add_option("--values", values, "comma-separated values (may be empty)")->required();
  optional_option(sweep, "--out", sw.out_path, "summary CSV path (default: stdout)");
  optional_option(sweep, "--horizon", sw.horizon, "override the horizon in seconds");
  sweep->add_flag("--no-saturation", sw.no_saturation, "disable the torque limit");
  sweep->add_option("--band-deg", sw.band_deg, "settling band in degrees")->capture_default_str();

  auto* properties = app.add_subcommand("properties", "run the model and controller property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }

  if (*simulate) return cli::cmd_simulate(sim, std::cout, std::cerr);
  if (*certify) return cli::cmd_certify(cert, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(ver, std::cout, std::cerr);
  if (*sweep) {
    try {
      sw.values = parse_values(values);
    } catch (const std::exception&) {
      std::cerr << "config error: --values must be a comma-separated list of numbers\n";
      return cli::kConfigError;
    }
    return cli::cmd_sweep(sw, std::cout, std::cerr);
  }
  if (*properties) return cli::cmd_properties(std::cout, std::cerr);
  return cli::kConfigError;
}
