#include "ricci/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

namespace ricci {

namespace {

using nlohmann::json;

// JSON has no infinities; an empty trace would otherwise leave them in margins.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const BarrierVerdict& v) {
  return {{"ok", v.ok},
          {"tolerance", v.tolerance},
          {"worst_margin", finite_or_null(v.worst_margin)},
          {"worst_time", v.worst_time}};
}

json to_json(const EigenBoundVerdict& v) {
  return {{"ok", v.ok},
          {"reliable", v.reliable},
          {"worst_relative_margin", finite_or_null(v.worst_margin)},
          {"worst_time", v.worst_time},
          {"limit_ok", v.limit_ok},
          {"limit_relative_margin", finite_or_null(v.limit_margin)}};
}

json inequality(bool ok, double rhs, double margin) {
  return {{"ok", ok}, {"rhs", rhs}, {"margin", margin}};
}

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<double> y;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

void write_chart(std::ostream& out, const std::string& title, const std::string& y_label,
                 const std::vector<double>& t, const std::vector<Series>& lines) {
  constexpr double W = 720, H = 440, left = 70, right = 170, top = 40, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;

  double tmin = t.empty() ? 0.0 : t.front(), tmax = t.empty() ? 1.0 : t.back();
  if (!(tmax > tmin)) tmax = tmin + 1.0;
  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto& s : lines) {
    for (double y : s.y) {
      if (!std::isfinite(y)) continue;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(ymin)) ymin = 0.0, ymax = 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto X = [&](double x) { return left + (x - tmin) / (tmax - tmin) * pw; };
  auto Y = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">)",
                     W, H)
      << '\n';
  out << fmt::format(R"(<rect width="{}" height="{}" fill="white"/>)", W, H) << '\n';
  out << fmt::format(R"(<text x="{}" y="22" font-size="15">{}</text>)", left, title) << '\n';
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>)", left, top, pw, ph)
      << '\n';
  for (int k = 0; k <= 4; ++k) {
    const double tv = tmin + (tmax - tmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">{:.3g}</text>)", X(tv), top + ph + 16, tv)
        << '\n';
    out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="end">{:.4g}</text>)", left - 6, Y(yv) + 4, yv)
        << '\n';
    out << fmt::format(R"(<line x1="{:.1f}" x2="{:.1f}" y1="{:.1f}" y2="{:.1f}" stroke="#ddd"/>)", left, left + pw,
                       Y(yv), Y(yv))
        << '\n';
  }
  out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle">t</text>)", left + pw / 2, H - 10) << '\n';
  out << fmt::format(R"svg(<text x="16" y="{:.1f}" transform="rotate(-90 16 {:.1f})" text-anchor="middle">{}</text>)svg",
                     top + ph / 2, top + ph / 2, y_label)
      << '\n';

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Series& s = lines[k];
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t i = 0; i < std::min(t.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      out << fmt::format("{:.2f},{:.2f} ", X(t[i]), Y(s.y[i]));
    }
    out << "\"/>\n";
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    out << fmt::format(R"(<line x1="{:.1f}" x2="{:.1f}" y1="{:.1f}" y2="{:.1f}" stroke="{}" stroke-width="1.5"{}/>)",
                       left + pw + 10, left + pw + 34, ly, ly, s.color, s.dashed ? R"( stroke-dasharray="5,3")" : "")
        << '\n';
    out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}">{}</text>)", left + pw + 40, ly + 4, s.label) << '\n';
  }
  out << "</svg>\n";
}

}  // namespace

std::string report_to_json(const TheoremReport& report, const Provenance& provenance, bool require_pointwise) {
  json doc;
  json prov = json::object();
  for (const auto& [key, value] : provenance) prov[key] = value;
  doc["provenance"] = prov;
  doc["euler_characteristic"] = report.euler_characteristic;
  doc["r"] = report.r;
  doc["kappa_g"] = report.kappa_g;
  doc["kappa_tilde"] = report.kappa_tilde;
  doc["kappa_tilde_measured"] = {report.kappa_tilde_measured_min, report.kappa_tilde_measured_max};
  doc["sigma"] = report.sigma;
  doc["sigma_overridden"] = report.sigma_overridden;
  doc["sigma_admissible"] = report.sigma_admissible;
  doc["volume_g"] = report.volume_g;
  doc["volume_tilde"] = report.volume_tilde;
  doc["final_time"] = report.final_time;
  doc["pointwise_bound"] = to_json(report.max_principle);
  doc["equivalence_ok"] = report.equivalence_ok;
  json indices = json::array();
  for (const TheoremIndexResult& r : report.indices) {
    indices.push_back({
        {"index", r.index},
        {"lambda_g", r.lambda_g},
        {"lambda_tilde", r.lambda_tilde},
        {"reliable", r.reliable},
        {"tolerance", r.tolerance},
        {"theorem1", inequality(r.theorem1_ok, r.rhs_t1, r.margin_t1)},
        {"theorem2a", inequality(r.theorem2a_ok, r.rhs_t2a, r.margin_t2a)},
        {"theorem2b", inequality(r.theorem2b_ok, r.rhs_t2b, r.margin_t2b)},
        {"theorem2b_consistent", r.theorem2b_consistent},
        {"theorem2c", inequality(r.theorem2c_ok, r.rhs_t2c, r.margin_t2c)},
        {"eigen_bound", to_json(r.eigen_bound)},
    });
  }
  doc["indices"] = indices;
  doc["pointwise_bound_required"] = require_pointwise;
  doc["all_ok"] = report.all_ok(require_pointwise);
  return doc.dump(2);
}

void write_eigen_chart_svg(std::ostream& out, const TraceSeries& series, std::optional<double> sigma_override) {
  std::vector<Series> lines;
  for (int i = 1; i <= series.eigen_count(); ++i) {
    const auto& lambda = series.lambda[static_cast<std::size_t>(i - 1)];
    const char* color = kPalette[static_cast<std::size_t>(i - 1) % std::size(kPalette)];
    lines.push_back({fmt::format("lambda_{}", i), color, false, lambda});
    if (lambda.empty()) continue;
    BarrierParams p{series.r_const, sigma_override.value_or(series.sigma), lambda.front()};
    Series bound{fmt::format("B_{}", i), color, true, {}};
    for (double t : series.t) bound.y.push_back(lower_bound_B(t, p));
    lines.push_back(std::move(bound));
  }
  write_chart(out, "Tracked eigenvalues and lower bounds", "lambda", series.t, lines);
}

void write_barrier_chart_svg(std::ostream& out, const TraceSeries& series, std::optional<double> sigma_override) {
  BarrierParams p{series.r_const, sigma_override.value_or(series.sigma), 1.0};
  Series s{"s(t)", kPalette[1], true, {}};
  for (double t : series.t) s.y.push_back(barrier_s(t, p));
  std::vector<Series> lines{{"min R", kPalette[0], false, series.scalar_min}, std::move(s)};
  write_chart(out, "Minimum scalar curvature and barrier", "R", series.t, lines);
}

}  // namespace ricci
