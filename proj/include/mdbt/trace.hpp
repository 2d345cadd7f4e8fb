#pragma once

#include <iosfwd>
#include <string>

#include "mdbt/solvers.hpp"

namespace mdbt {

/// Trace CSV layout:
///   # key=value            (ordered metadata echo, one per line)
///   event,total_oracle_calls,n_value_evals,n_grad_evals,f_value,event_kind,set_log_volume
///   0,3,2,1,0.5,reject,12.25
/// Floats carry 17 significant digits so the round-trip is lossless.
void write_trace(const RunTrace& trace, std::ostream& out);
std::string trace_to_string(const RunTrace& trace);

/// Parses a trace CSV; throws ParseError with the offending line number.
RunTrace read_trace(std::istream& in);
RunTrace read_trace_file(const std::string& path);

}  // namespace mdbt
