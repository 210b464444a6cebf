#pragma once

#include <istream>
#include <string>
#include <vector>

#include "blf/simulator.hpp"

namespace blf {

/// A parsed, validated scenario file.
///
/// File format (sections and keys; values are whitespace- or comma-separated,
/// `#` and `;` start comments, missing keys take the bundled defaults):
///
///   [model]      theta
///   [gains]      k, K, delta_deg, gamma, variant (log|tan), tau_max (real|none)
///   [trajectory] amplitude, omega, alpha
///   [sim]        dt, horizon, e0_deg, qdot0, theta_hat0
///   [output]     trace_path, metrics_path
///
/// Angles are degrees in the file and radians everywhere else. The initial
/// joint position is q(0) = q_d(0) - e0.
struct Scenario {
  SimConfig sim;
  Vector e0;  ///< rad
  std::string trace_path;
  std::string metrics_path;
};

/// The two-link reference setup: Delta = 7 deg, e(0) = 2.9 deg per joint,
/// K = [2, 2], k = diag(80, 20), Gamma = diag(50, 0.5, 1, 80, 2.5),
/// tau_max = 10 N m, q_d = [0.7, 1.2] sin(t)(1 - exp(-0.3 t^3)), dt = 1 ms, 60 s.
Scenario reference_scenario();

/// Throws ConfigParse with "<source>:<line>: ..." on any error, including
/// every precondition the simulator would otherwise reject mid-run.
Scenario parse_scenario(std::istream& in, const std::string& source = "<input>");
Scenario load_scenario(const std::string& path);

/// Recomputes q0 from e0 after the trajectory or e0 changed, and re-validates.
void refresh_initial_state(Scenario& sc);

}  // namespace blf
