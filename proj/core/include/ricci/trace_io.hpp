#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ricci/bounds.hpp"
#include "ricci/flow.hpp"

namespace ricci {

/// Reads a FlowConfig from a JSON object whose keys match the field names.
/// Missing keys keep their defaults; unknown keys are rejected.
FlowConfig flow_config_from_json(const std::string& text);
std::string flow_config_to_json(const FlowConfig& config);

/// Ordered key/value provenance written as `# key: value` header lines.
using Provenance = std::vector<std::pair<std::string, std::string>>;

/// One row per snapshot: t, V, r, R_min, R_max, lambda_1..lambda_k (tracked
/// branches). Run metadata precedes the column header as comment lines.
void write_trace_csv(std::ostream& out, const TraceSeries& series, const Provenance& provenance = {});

/// Parses a CSV written by write_trace_csv, including its metadata lines.
TraceSeries read_trace_csv(std::istream& in, Provenance* provenance = nullptr);

/// Final conformal factors as JSON: {"t": ..., "u": [...], plus provenance}.
void write_state_json(std::ostream& out, const MetricState& state, const Provenance& provenance = {});
MetricState read_state_json(std::istream& in);

}  // namespace ricci
