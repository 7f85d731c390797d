#include "ricci/trace_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ricci/error.hpp"

namespace ricci {

namespace {

using nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("malformed number '" + s + "' in " + what);
  }
}

}  // namespace

FlowConfig flow_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw PreconditionError(std::string("flow config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw PreconditionError("flow config must be a JSON object");
  FlowConfig config;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "dt_init") config.dt_init = value.get<double>();
      else if (key == "dt_min") config.dt_min = value.get<double>();
      else if (key == "safety_shrink") config.safety_shrink = value.get<double>();
      else if (key == "convergence_tol") config.convergence_tol = value.get<double>();
      else if (key == "max_steps") config.max_steps = value.get<long>();
      else if (key == "snapshot_stride") config.snapshot_stride = value.get<int>();
      else if (key == "eigen_count") config.eigen_count = value.get<int>();
      else if (key == "overlap_floor") config.overlap_floor = value.get<double>();
      else if (key == "stability_limit") config.stability_limit = value.get<bool>();
      else throw PreconditionError("unknown flow config field '" + key + "'");
    } catch (const json::type_error&) {
      throw PreconditionError("flow config field '" + key + "' has the wrong type");
    }
  }
  validate(config);
  return config;
}

std::string flow_config_to_json(const FlowConfig& config) {
  json doc = {
      {"dt_init", config.dt_init},
      {"dt_min", config.dt_min},
      {"safety_shrink", config.safety_shrink},
      {"convergence_tol", config.convergence_tol},
      {"max_steps", config.max_steps},
      {"snapshot_stride", config.snapshot_stride},
      {"eigen_count", config.eigen_count},
      {"overlap_floor", config.overlap_floor},
      {"stability_limit", config.stability_limit},
  };
  return doc.dump(2);
}

void write_trace_csv(std::ostream& out, const TraceSeries& series, const Provenance& provenance) {
  for (const auto& [key, value] : provenance) out << "# " << key << ": " << value << '\n';
  out << "# chi: " << series.euler_characteristic << '\n';
  out << "# r: " << num(series.r_const) << '\n';
  out << "# sigma: " << num(series.sigma) << '\n';
  out << "# volume0: " << num(series.volume0) << '\n';
  out << "# convergence_tol: " << num(series.convergence_tol) << '\n';
  out << "# converged: " << (series.converged ? "true" : "false") << '\n';
  out << "# ambiguous:";
  for (std::size_t i = 0; i < series.ambiguous.size(); ++i) {
    if (series.ambiguous[i]) out << ' ' << i + 1;
  }
  out << '\n';

  out << "t,V,r,R_min,R_max";
  for (int i = 1; i <= series.eigen_count(); ++i) out << ",lambda_" << i;
  out << '\n';
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << num(series.t[s]) << ',' << num(series.volume[s]) << ',' << num(series.r[s]) << ','
        << num(series.scalar_min[s]) << ',' << num(series.scalar_max[s]);
    for (const auto& column : series.lambda) out << ',' << num(column[s]);
    out << '\n';
  }
}

TraceSeries read_trace_csv(std::istream& in, Provenance* provenance) {
  TraceSeries series;
  std::string line;
  bool header_seen = false;
  bool have_chi = false, have_sigma = false, have_r = false;
  std::vector<int> ambiguous;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (line.rfind('#', 0) == 0) {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(1, colon - 1));
      const std::string value = trim(line.substr(colon + 1));
      if (key == "chi") {
        series.euler_characteristic = static_cast<int>(parse_double(value, key));
        have_chi = true;
      } else if (key == "r") {
        series.r_const = parse_double(value, key);
        have_r = true;
      } else if (key == "sigma") {
        series.sigma = parse_double(value, key);
        have_sigma = true;
      } else if (key == "volume0") {
        series.volume0 = parse_double(value, key);
      } else if (key == "convergence_tol") {
        series.convergence_tol = parse_double(value, key);
      } else if (key == "converged") {
        series.converged = value == "true";
      } else if (key == "ambiguous") {
        std::istringstream ls(value);
        int idx = 0;
        while (ls >> idx) ambiguous.push_back(idx);
      } else if (provenance != nullptr) {
        provenance->emplace_back(key, value);
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (!header_seen) {
      if (cells.size() < 5 || cells[0] != "t" || cells[1] != "V" || cells[2] != "r" || cells[3] != "R_min" ||
          cells[4] != "R_max") {
        throw Error("trace CSV header must start with t,V,r,R_min,R_max");
      }
      series.lambda.resize(cells.size() - 5);
      header_seen = true;
      continue;
    }
    if (cells.size() != 5 + series.lambda.size()) throw Error("trace CSV row has the wrong number of columns");
    series.t.push_back(parse_double(cells[0], "t"));
    series.volume.push_back(parse_double(cells[1], "V"));
    series.r.push_back(parse_double(cells[2], "r"));
    series.scalar_min.push_back(parse_double(cells[3], "R_min"));
    series.scalar_max.push_back(parse_double(cells[4], "R_max"));
    for (std::size_t i = 0; i < series.lambda.size(); ++i) {
      series.lambda[i].push_back(parse_double(cells[5 + i], "lambda"));
    }
  }
  if (!header_seen || series.size() == 0) throw Error("trace CSV has no data rows");
  if (!have_chi || !have_sigma || !have_r) throw Error("trace CSV lacks chi/r/sigma metadata");
  series.ambiguous.assign(series.lambda.size(), false);
  for (int idx : ambiguous) {
    if (idx >= 1 && static_cast<std::size_t>(idx) <= series.ambiguous.size()) {
      series.ambiguous[static_cast<std::size_t>(idx - 1)] = true;
    }
  }
  return series;
}

void write_state_json(std::ostream& out, const MetricState& state, const Provenance& provenance) {
  json doc = json::object();
  for (const auto& [key, value] : provenance) doc[key] = value;
  doc["t"] = state.t;
  doc["u"] = state.u;
  out << doc.dump(1) << '\n';
}

MetricState read_state_json(std::istream& in) {
  try {
    const json doc = json::parse(in);
    MetricState state;
    state.t = doc.at("t").get<double>();
    state.u = doc.at("u").get<std::vector<double>>();
    return state;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed state file: ") + e.what());
  }
}

}  // namespace ricci
