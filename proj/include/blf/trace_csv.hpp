#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "blf/simulator.hpp"

namespace blf {

/// Header for n joints and p parameters. For the two-link arm:
/// t,q1,q2,qd1,qd2,e1,e2,ef1,ef2,eta1,eta2,tau1,tau2,tau1_raw,tau2_raw,th1,th2,th3,th4,th5,V
std::string trace_csv_header(int n, int p);

/// One record per line, every value printed with 9 significant digits ("%.9g").
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Parses a file produced by write_trace_csv. K_e is left empty. Throws
/// TraceParse with the offending line number.
Trace read_trace_csv(std::istream& in, const std::string& source = "<trace>");

std::string format_number(double v);

}  // namespace blf
