#include "blf/trace_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "blf/errors.hpp"

namespace blf {

std::string trace_csv_header(int n, int p) {
  std::string h = "t";
  auto group = [&](const char* prefix, const char* suffix, int count) {
    for (int i = 1; i <= count; ++i) h += "," + std::string(prefix) + std::to_string(i) + suffix;
  };
  group("q", "", n);
  group("qd", "", n);
  group("e", "", n);
  group("ef", "", n);
  group("eta", "", n);
  group("tau", "", n);
  group("tau", "_raw", n);
  group("th", "", p);
  h += ",V";
  return h;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  if (trace.records.empty()) return;
  const auto& first = trace.records.front();
  const int n = static_cast<int>(first.q.size());
  const int p = static_cast<int>(first.theta_hat.size());
  out << trace_csv_header(n, p) << '\n';
  std::string line;
  for (const auto& r : trace.records) {
    line = format_number(r.t);
    for (const Vector* v : {&r.q, &r.q_desired, &r.e, &r.e_f, &r.eta, &r.tau, &r.tau_raw,
                            &r.theta_hat}) {
      for (Eigen::Index i = 0; i < v->size(); ++i) {
        line += ',';
        line += format_number((*v)(i));
      }
    }
    line += ',';
    line += format_number(r.V);
    out << line << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& source, int line, const std::string& msg) {
  throw TraceParse(source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Trace read_trace_csv(std::istream& in, const std::string& source) {
  auto fail = [&source](int line, const std::string& msg) { parse_error(source, line, msg); };

  std::string header;
  if (!std::getline(in, header)) fail(1, "empty trace");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto names = split_commas(header);
  int n = 0, p = 0;
  for (const auto& name : names) {
    if (name.size() > 1 && name[0] == 'q' && name.find_first_not_of("0123456789", 1) == std::string::npos) ++n;
    if (name.size() > 2 && name.rfind("th", 0) == 0 &&
        name.find_first_not_of("0123456789", 2) == std::string::npos) {
      ++p;
    }
  }
  if (n == 0 || header != trace_csv_header(n, p)) fail(1, "unexpected header '" + header + "'");
  const std::size_t columns = names.size();

  Trace trace;
  std::string line;
  int lineno = 1;
  std::vector<double> vals(columns);
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) fail(lineno, "empty line");
    const auto cells = split_commas(line);
    if (cells.size() != columns) {
      fail(lineno, "expected " + std::to_string(columns) + " columns, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      const auto& cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), vals[c]);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(vals[c])) {
        fail(lineno, "column '" + names[c] + "': '" + cell + "' is not a finite number");
      }
    }
    TraceRecord r;
    std::size_t c = 0;
    r.t = vals[c++];
    auto take = [&](int count) {
      Vector v(count);
      for (int i = 0; i < count; ++i) v(i) = vals[c++];
      return v;
    };
    r.q = take(n);
    r.q_desired = take(n);
    r.e = take(n);
    r.e_f = take(n);
    r.eta = take(n);
    r.tau = take(n);
    r.tau_raw = take(n);
    r.theta_hat = take(p);
    r.V = vals[c++];
    if (!trace.records.empty() && !(r.t > trace.records.back().t)) {
      fail(lineno, "time is not strictly increasing");
    }
    trace.records.push_back(std::move(r));
  }
  if (trace.records.empty()) fail(lineno, "trace has no records");
  return trace;
}

}  // namespace blf
