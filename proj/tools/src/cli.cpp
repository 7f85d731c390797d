#include "ricci_lab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ricci/bounds.hpp"
#include "ricci/error.hpp"
#include "ricci/flow.hpp"
#include "ricci/generator.hpp"
#include "ricci/geometry.hpp"
#include "ricci/mesh_io.hpp"
#include "ricci/report_io.hpp"
#include "ricci/trace_io.hpp"

#ifndef RICCI_LAB_VERSION
#define RICCI_LAB_VERSION "0.0.0"
#endif

namespace ricci_lab {

namespace fs = std::filesystem;

namespace {

// Carries a specific exit code out of a command.
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kIoError, "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Exit{kIoError, "cannot write '" + path.string() + "'"};
  out << content;
  out.flush();
  if (!out) throw Exit{kIoError, "write failed for '" + path.string() + "'"};
}

std::string num(double x) { return fmt::format("{}", x); }  // shortest round-trip form

struct FlowFlags {
  std::string config_path;
  std::optional<double> dt_init, dt_min, safety_shrink, convergence_tol, overlap_floor;
  std::optional<long> max_steps;
  std::optional<int> snapshot_stride, eigen_count;
  bool no_stability_limit = false;
  int eigen_max_iter = ricci::EigenSolverOptions{}.max_iterations;
  double eigen_tol = ricci::EigenSolverOptions{}.residual_tol;
};

void add_flow_flags(CLI::App* cmd, FlowFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON flow configuration; flags override it");
  cmd->add_option("--dt-init", f.dt_init, "initial and maximal time step");
  cmd->add_option("--dt-min", f.dt_min, "smallest step before giving up");
  cmd->add_option("--safety-shrink", f.safety_shrink, "step factor after a rejected step");
  cmd->add_option("--tol", f.convergence_tol, "stop when max |R - r| <= tol |r|");
  cmd->add_option("--max-steps", f.max_steps, "accepted step budget");
  cmd->add_option("--stride", f.snapshot_stride, "record every n-th accepted step");
  cmd->add_option("--eigen-count", f.eigen_count, "tracked eigenvalues lambda_1..lambda_k");
  cmd->add_option("--overlap-floor", f.overlap_floor, "minimum overlap for a reliable pairing");
  cmd->add_flag("--no-stability-limit", f.no_stability_limit, "do not cap dt at the explicit stability limit");
  cmd->add_option("--eigen-max-iter", f.eigen_max_iter, "eigensolver iteration budget")->check(CLI::PositiveNumber);
  cmd->add_option("--eigen-tol", f.eigen_tol, "eigensolver relative residual target")->check(CLI::PositiveNumber);
}

ricci::FlowConfig resolve_config(const FlowFlags& f) {
  ricci::FlowConfig c;
  if (!f.config_path.empty()) c = ricci::flow_config_from_json(read_file(f.config_path));
  if (f.dt_init) c.dt_init = *f.dt_init;
  if (f.dt_min) c.dt_min = *f.dt_min;
  if (f.safety_shrink) c.safety_shrink = *f.safety_shrink;
  if (f.convergence_tol) c.convergence_tol = *f.convergence_tol;
  if (f.max_steps) c.max_steps = *f.max_steps;
  if (f.snapshot_stride) c.snapshot_stride = *f.snapshot_stride;
  if (f.eigen_count) c.eigen_count = *f.eigen_count;
  if (f.overlap_floor) c.overlap_floor = *f.overlap_floor;
  if (f.no_stability_limit) c.stability_limit = false;
  ricci::validate(c);
  return c;
}

ricci::EigenSolverOptions solver_options(const FlowFlags& f) {
  ricci::EigenSolverOptions o;
  o.max_iterations = f.eigen_max_iter;
  o.residual_tol = f.eigen_tol;
  return o;
}

struct LoadedMesh {
  ricci::IntrinsicMesh mesh;
  std::string digest;
};

LoadedMesh load(const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  return {ricci::load_mesh(in, ricci::format_from_path(path)), sha256_hex(bytes)};
}

fs::path output_dir(const std::string& flag) { return flag.empty() ? fs::path(default_output_dir()) : fs::path(flag); }

ricci::Provenance run_provenance(const std::string& command, const std::string& digest, const ricci::FlowConfig& config,
                                 const ricci::EigenSolverOptions& solver) {
  std::string compact = ricci::flow_config_to_json(config);
  compact.erase(std::remove(compact.begin(), compact.end(), '\n'), compact.end());
  compact.erase(std::unique(compact.begin(), compact.end(), [](char a, char b) { return a == ' ' && b == ' '; }),
                compact.end());
  return {
      {"tool", "ricci-lab " RICCI_LAB_VERSION},
      {"command", command},
      {"input_sha256", digest},
      {"config", compact},
      {"eigen_max_iter", std::to_string(solver.max_iterations)},
      {"eigen_tol", num(solver.residual_tol)},
      {"eigen_seed", std::to_string(solver.seed)},
  };
}

struct FlowRun {
  ricci::TraceSeries series;
  ricci::FlowTrace trace;
  ricci::Provenance provenance;
};

FlowRun execute_flow(const std::string& mesh_path, const FlowFlags& flags, const std::string& command,
                     std::ostream& err) {
  const ricci::FlowConfig config = resolve_config(flags);
  const ricci::EigenSolverOptions solver = solver_options(flags);
  LoadedMesh input = load(mesh_path);
  FlowRun run;
  try {
    run.trace = ricci::run_flow(input.mesh, config, solver);
  } catch (const ricci::StepUnderflow& e) {
    throw Exit{kStepUnderflow, e.what()};
  } catch (const ricci::SolverError& e) {
    throw Exit{kSolverFailed, std::string("eigensolver did not converge: ") + e.what()};
  }
  run.series = ricci::summarize(run.trace, config.convergence_tol);
  run.provenance = run_provenance(command, input.digest, config, solver);
  run.provenance.emplace_back("steps", std::to_string(run.trace.step_count));
  run.provenance.emplace_back("rejected_steps", std::to_string(run.trace.rejected_steps));
  for (const auto& track : run.trace.tracks) {
    if (track.ambiguous()) {
      err << fmt::format("warning: track lambda_{} has an overlap below {}\n", track.index, config.overlap_floor);
    }
  }
  return run;
}

int cmd_generate(int rounds, double perturb, std::uint64_t seed, const std::string& out_flag, std::ostream& out) {
  ricci::Genus2Params params{rounds, perturb, seed};
  const ricci::IntrinsicMesh mesh = ricci::generate_genus2(params);
  const std::string canonical = fmt::format("genus2 rounds={} perturb={} seed={}", rounds, num(perturb), seed);
  const std::vector<std::string> header = {
      "tool: ricci-lab " RICCI_LAB_VERSION,
      "command: generate",
      "generator: " + canonical,
      "input_sha256: " + sha256_hex(canonical),
      fmt::format("vertices: {} edges: {} faces: {} chi: {}", mesh.vertex_count(), mesh.edge_count(),
                  mesh.face_count(), mesh.euler_characteristic()),
  };
  std::ostringstream buf;
  ricci::write_off(mesh, buf, header);
  const fs::path path = out_flag.empty() ? output_dir("") / "genus2.off" : fs::path(out_flag);
  write_file(path, buf.str());
  out << fmt::format("wrote {} (V={} E={} F={} chi={})\n", path.string(), mesh.vertex_count(), mesh.edge_count(),
                     mesh.face_count(), mesh.euler_characteristic());
  return kOk;
}

struct FlowOutputs {
  std::string out_dir, trace_path, state_path, final_mesh_path;
};

int cmd_flow(const std::string& mesh_path, const FlowFlags& flags, const FlowOutputs& o, std::ostream& out,
             std::ostream& err) {
  FlowRun run = execute_flow(mesh_path, flags, "flow", err);
  const fs::path dir = output_dir(o.out_dir);
  const fs::path trace_path = o.trace_path.empty() ? dir / "trace.csv" : fs::path(o.trace_path);
  const fs::path state_path = o.state_path.empty() ? dir / "state.json" : fs::path(o.state_path);

  std::ostringstream csv;
  ricci::write_trace_csv(csv, run.series, run.provenance);
  write_file(trace_path, csv.str());
  std::ostringstream state;
  ricci::write_state_json(state, run.trace.final().state, run.provenance);
  write_file(state_path, state.str());
  if (!o.final_mesh_path.empty()) {
    const ricci::IntrinsicMesh input = load(mesh_path).mesh;
    std::ostringstream mesh;
    ricci::write_off(ricci::bake_metric(input, run.trace.final().state), mesh,
                     {"tool: ricci-lab " RICCI_LAB_VERSION, "command: flow --final-mesh",
                      "input_sha256: " + run.provenance[2].second, fmt::format("t: {}", num(run.trace.final().state.t))});
    write_file(o.final_mesh_path, mesh.str());
  }

  const auto& last = run.trace.final().curvature;
  out << fmt::format("{} after {} steps (t = {:.6g}); r = {:.10g}, R in [{:.10g}, {:.10g}]\n",
                     run.trace.converged ? "converged" : "not converged", run.trace.step_count,
                     run.trace.final().state.t, run.trace.r, last.min_scalar(), last.max_scalar());
  out << fmt::format("wrote {} and {}\n", trace_path.string(), state_path.string());
  if (!run.trace.converged) {
    err << fmt::format("error: no convergence within {} steps; max |R - r| = {:.6g}\n", run.trace.step_count,
                       last.scalar_deviation());
    return kNotConverged;
  }
  return kOk;
}

struct VerifyOptions {
  std::string trace_path, mesh_path, out_dir, report_path;
  std::optional<double> sigma;
  bool plots = false;
  bool require_barrier = false;
};

int cmd_verify(const VerifyOptions& v, const FlowFlags& flags, std::ostream& out, std::ostream& err) {
  if (v.trace_path.empty() == v.mesh_path.empty()) throw Exit{kUsage, "verify needs exactly one of --trace or --mesh"};
  ricci::TraceSeries series;
  ricci::Provenance provenance;
  if (!v.trace_path.empty()) {
    const std::string bytes = read_file(v.trace_path);
    std::istringstream in(bytes);
    try {
      series = ricci::read_trace_csv(in, &provenance);
    } catch (const ricci::Error& e) {
      throw Exit{kIoError, std::string("cannot parse trace: ") + e.what()};
    }
    provenance.emplace_back("trace_sha256", sha256_hex(bytes));
  } else {
    FlowRun run = execute_flow(v.mesh_path, flags, "verify", err);
    series = std::move(run.series);
    provenance = std::move(run.provenance);
  }
  if (v.sigma) provenance.emplace_back("sigma_override", num(*v.sigma));
  if (!series.converged) {
    err << "error: the trace did not converge; theorem verdicts need the limit metric\n";
    return kNotConverged;
  }

  const ricci::TheoremReport report = ricci::check_theorems(series, v.sigma);
  const fs::path dir = output_dir(v.out_dir);
  const fs::path report_path = v.report_path.empty() ? dir / "report.json" : fs::path(v.report_path);
  write_file(report_path, ricci::report_to_json(report, provenance, v.require_barrier) + "\n");
  if (v.plots) {
    std::ostringstream eigen, barrier;
    ricci::write_eigen_chart_svg(eigen, series, v.sigma);
    ricci::write_barrier_chart_svg(barrier, series, v.sigma);
    write_file(dir / "eigenvalues.svg", eigen.str());
    write_file(dir / "barrier.svg", barrier.str());
  }

  auto mark = [](bool ok) { return ok ? "pass" : "FAIL"; };
  out << fmt::format("kappa_g = {:.10g}, kappa~ = {:.10g}, sigma = {:.10g}\n", report.kappa_g, report.kappa_tilde,
                     report.sigma);
  if (!report.sigma_admissible) {
    err << fmt::format("warning: sigma = {} exceeds the initial minimum Gauss curvature {}\n", num(report.sigma),
                       num(report.kappa_g));
  }
  out << fmt::format("pointwise barrier: {} (worst margin {:.4g} at t = {:.4g}){}\n",
                     mark(report.max_principle.ok), report.max_principle.worst_margin,
                     report.max_principle.worst_time, v.require_barrier ? "" : " [informational]");
  for (const auto& r : report.indices) {
    out << fmt::format("lambda_{}: T1 {} T2a {} T2b {} T2c {} bound {}{}\n", r.index, mark(r.theorem1_ok),
                       mark(r.theorem2a_ok), mark(r.theorem2b_ok && r.theorem2b_consistent), mark(r.theorem2c_ok),
                       mark(r.eigen_bound.ok), r.reliable ? "" : " (ambiguous track)");
  }
  out << fmt::format("wrote {}\n", report_path.string());
  return report.all_ok(v.require_barrier) ? kOk : kVerdictFailed;
}

}  // namespace

std::string default_output_dir() {
  const char* env = std::getenv("RICCI_LAB_OUT");
  return env != nullptr && *env != '\0' ? std::string(env) : std::string(".");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized Ricci flow and Laplace spectrum laboratory", "ricci-lab"};
  app.set_version_flag("--version", RICCI_LAB_VERSION);
  app.require_subcommand(1);

  int rounds = 3;
  double perturb = 0.0;
  std::uint64_t seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "write a genus-2 mesh");
  gen->add_flag("--genus2", "octagon gluing (the only family)");
  gen->add_option("--rounds", rounds, "midpoint subdivision rounds")->check(CLI::Range(1, 8));
  gen->add_option("--perturb", perturb, "conformal perturbation amplitude")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", seed, "perturbation seed");
  gen->add_option("--out", gen_out, "output OFF path");

  std::string flow_mesh;
  FlowFlags flow_flags;
  FlowOutputs flow_out;
  auto* flow = app.add_subcommand("flow", "run the normalized flow and record the spectrum");
  flow->add_option("mesh,--mesh", flow_mesh, "input OFF/OBJ mesh")->required();
  add_flow_flags(flow, flow_flags);
  flow->add_option("--out-dir", flow_out.out_dir, "output directory (default $RICCI_LAB_OUT or .)");
  flow->add_option("--trace", flow_out.trace_path, "trace CSV path (default <out-dir>/trace.csv)");
  flow->add_option("--state", flow_out.state_path, "final state path (default <out-dir>/state.json)");
  flow->add_option("--final-mesh", flow_out.final_mesh_path, "also write the final metric as an OFF mesh");

  VerifyOptions verify_opts;
  FlowFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "evaluate the eigenvalue bounds on a converged trace");
  verify->add_option("--trace", verify_opts.trace_path, "trace CSV written by flow");
  verify->add_option("--mesh", verify_opts.mesh_path, "run the flow on this mesh first");
  add_flow_flags(verify, verify_flags);
  verify->add_option("--sigma", verify_opts.sigma, "lower bound of the initial Gauss curvature (default: its minimum)");
  verify->add_flag("--plots", verify_opts.plots, "write eigenvalues.svg and barrier.svg");
  verify->add_flag("--require-barrier", verify_opts.require_barrier,
                   "let the pointwise curvature barrier decide the exit code too");
  verify->add_option("--out-dir", verify_opts.out_dir, "output directory (default $RICCI_LAB_OUT or .)");
  verify->add_option("--report", verify_opts.report_path, "report path (default <out-dir>/report.json)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(rounds, perturb, seed, gen_out, out);
    if (*flow) return cmd_flow(flow_mesh, flow_flags, flow_out, out, err);
    if (*verify) return cmd_verify(verify_opts, verify_flags, out, err);
    return kUsage;
  } catch (const Exit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const ricci::FlowRefusal& e) {
    err << "error: " << e.what() << '\n';
    return kChiRefusal;
  } catch (const ricci::StepUnderflow& e) {
    err << "error: " << e.what() << '\n';
    return kStepUnderflow;
  } catch (const ricci::SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailed;
  } catch (const ricci::MeshError& e) {
    err << "error: invalid mesh: " << e.what() << '\n';
    return kInvalidMesh;
  } catch (const ricci::DegenerateTriangle& e) {
    err << "error: invalid mesh: " << e.what() << '\n';
    return kInvalidMesh;
  } catch (const ricci::PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace ricci_lab
