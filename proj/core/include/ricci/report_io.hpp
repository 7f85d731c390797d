#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ricci/bounds.hpp"
#include "ricci/trace_io.hpp"

namespace ricci {

/// Machine-readable verdicts; the schema is described in docs/report.md.
std::string report_to_json(const TheoremReport& report, const Provenance& provenance = {},
                           bool require_pointwise = false);

/// Line chart of every tracked lambda_i(t) against its bound B_i(t).
void write_eigen_chart_svg(std::ostream& out, const TraceSeries& series,
                           std::optional<double> sigma_override = std::nullopt);

/// Line chart of min R(t) against the barrier s(t).
void write_barrier_chart_svg(std::ostream& out, const TraceSeries& series,
                             std::optional<double> sigma_override = std::nullopt);

}  // namespace ricci
