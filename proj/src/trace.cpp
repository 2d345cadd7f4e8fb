#include "mdbt/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mdbt/errors.hpp"

namespace mdbt {

namespace {

const char* kHeader =
    "event,total_oracle_calls,n_value_evals,n_grad_evals,f_value,event_kind,"
    "set_log_volume";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad float '" + tok + "'", line_no);
  }
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + tok + "'", line_no);
  }
}

}  // namespace

void write_trace(const RunTrace& trace, std::ostream& out) {
  for (const auto& [k, v] : trace.meta) out << "# " << k << '=' << v << '\n';
  out << kHeader << '\n';
  for (const TraceEvent& e : trace.events) {
    out << e.index << ',' << e.total_oracle_calls() << ',' << e.n_value_evals
        << ',' << e.n_grad_evals << ',' << fmt17(e.f_value) << ','
        << event_kind_name(e.kind) << ',' << fmt17(e.set_log_volume) << '\n';
  }
}

std::string trace_to_string(const RunTrace& trace) {
  std::ostringstream ss;
  write_trace(trace, ss);
  return ss.str();
}

RunTrace read_trace(std::istream& in) {
  RunTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.erase(0, 1);
      const std::size_t eq = body.find('=');
      if (eq == std::string::npos)
        throw ParseError("metadata line without '='", line_no);
      trace.meta.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!saw_header) {
      if (line != kHeader) throw ParseError("unexpected column header", line_no);
      saw_header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw ParseError("expected 7 columns", line_no);

    TraceEvent e;
    e.index = parse_u64(cells[0], line_no);
    const std::uint64_t total = parse_u64(cells[1], line_no);
    e.n_value_evals = parse_u64(cells[2], line_no);
    e.n_grad_evals = parse_u64(cells[3], line_no);
    if (total != e.n_value_evals + e.n_grad_evals)
      throw ParseError("total_oracle_calls does not match the parts", line_no);
    e.f_value = parse_double(cells[4], line_no);
    const auto kind = event_kind_from_name(cells[5]);
    if (!kind) throw ParseError("unknown event kind '" + cells[5] + "'", line_no);
    e.kind = *kind;
    e.set_log_volume = parse_double(cells[6], line_no);
    trace.events.push_back(e);
  }
  if (!saw_header) throw ParseError("missing column header", line_no);

  if (const std::string* st = trace.find_meta("status")) {
    if (*st == "converged") trace.status = RunStatus::converged;
    else if (*st == "budget_exhausted") trace.status = RunStatus::budget_exhausted;
    else if (*st == "set_collapsed") trace.status = RunStatus::set_collapsed;
    else if (*st == "diverged") trace.status = RunStatus::diverged;
    else throw ParseError("unknown status '" + *st + "'", line_no);
  }
  if (!trace.events.empty()) {
    trace.f_final = trace.events.back().f_value;
    trace.counter.n_value_evals = trace.events.back().n_value_evals;
    trace.counter.n_grad_evals = trace.events.back().n_grad_evals;
  } else if (const std::string* f0 = trace.find_meta("f_init")) {
    trace.f_final = parse_double(*f0, line_no);
  }
  return trace;
}

RunTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace(in);
}

}  // namespace mdbt
