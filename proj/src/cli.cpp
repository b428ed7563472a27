#include "qdistill/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdistill/distill.hpp"
#include "qdistill/io.hpp"

namespace qdistill {

namespace {

using nlohmann::json;

// Input problems map to exit 2, configuration problems to exit 1.
struct BadStateFile {
  std::string message;
};
struct BadConfig {
  std::string message;
};

struct SourceOpts {
  std::string in_path;
  double werner = 0;
  std::vector<double> eq10;
  std::uint64_t random_seed = 0;
};

void add_source_flags(CLI::App* sub, SourceOpts& src) {
  sub->add_option("--in", src.in_path, "input state file (JSON)");
  sub->add_option("--werner", src.werner, "Werner state with the given fidelity");
  sub->add_option("--eq10", src.eq10, "family state parameters C D P")->expected(3);
  sub->add_option("--random", src.random_seed, "seeded random mixed state (4 pure terms)");
}

DensityMatrix load_source(const CLI::App* sub, const SourceOpts& src) {
  int picked = (sub->count("--in") > 0) + (sub->count("--werner") > 0) +
               (sub->count("--eq10") > 0) + (sub->count("--random") > 0);
  if (picked != 1) throw BadConfig{"exactly one of --in, --werner, --eq10, --random is required"};
  try {
    if (sub->count("--in")) return read_state_file(src.in_path);
    if (sub->count("--werner")) return werner_state(src.werner);
    if (sub->count("--eq10")) return eq10_state(src.eq10[0], src.eq10[1], src.eq10[2]);
    return random_mixed(src.random_seed, 4);
  } catch (const Error& e) {
    if (sub->count("--in")) throw BadStateFile{e.what()};
    throw BadConfig{e.what()};
  }
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw BadConfig{"cannot open output file: " + out_path};
  out << content;
}

void require_target(double f_target) {
  if (!(f_target > 0.5) || !(f_target < 1)) throw BadConfig{"--target must lie in (0.5, 1)"};
}

int cmd_analyze(const DensityMatrix& rho, const std::string& out_path) {
  json rep;
  rep["command"] = "analyze";
  PptVerdict verdict = ppt_test(rho);
  rep["inseparable"] = verdict.inseparable;
  rep["min_pt_eigenvalue"] = verdict.min_eigenvalue;
  rep["fidelity_before"] = singlet_fraction(rho).f;
  if (verdict.inseparable) {
    FilterDerivation der = derive_filter(rho);
    DensityMatrix state = der.rotated;
    double p_pass = 1.0;
    if (!filter_is_identity(der)) {
      FilterResult filtered = filter_ensemble(der.rotated, der.filter);
      state = filtered.state;
      p_pass = filtered.pass_probability;
    }
    rep["filter"] = {{"a", der.schmidt.a},
                     {"b", der.schmidt.b},
                     {"w", {der.filter.w(0, 0).real(), der.filter.w(1, 1).real()}},
                     {"side", "B"},
                     {"pass_probability", p_pass}};
    rep["fidelity_after"] = singlet_fraction(state).f;
  }
  write_output(out_path, rep.dump(2) + "\n");
  return kExitOk;
}

int cmd_geometry(const DensityMatrix& rho, const std::string& out_path, bool csv) {
  GeometryReport rep = geometry_report(rho);
  if (csv) {
    std::ostringstream out;
    out.precision(17);
    out << "t1,t2,t3\n" << rep.d(0) << "," << rep.d(1) << "," << rep.d(2) << "\n";
    write_output(out_path, out.str());
  } else {
    write_output(out_path, geometry_to_json(rep).dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_distill(const DensityMatrix& rho, double f_target, int max_steps,
                const std::string& out_path, bool csv) {
  require_target(f_target);
  if (max_steps < 0) throw BadConfig{"--steps must be >= 0"};
  DistillationReport rep;
  int code = kExitOk;
  try {
    rep = distill_pipeline(rho, f_target, max_steps);
  } catch (const PipelineError& e) {
    std::cerr << e.what() << "\n";
    rep = e.report;
    code = e.kind() == ErrorKind::NotDistillable ? kExitNotDistillable : kExitTargetUnreachable;
  }
  if (csv)
    write_output(out_path, stages_csv(rep) + "\n" + trail_csv(rep));
  else
    write_output(out_path, report_to_json(rep).dump(2) + "\n");
  return code;
}

int cmd_simulate(const DensityMatrix& rho, std::int64_t n_pairs, double f_target, int max_steps,
                 std::uint64_t seed, int workers, const std::string& out_path) {
  require_target(f_target);
  if (n_pairs < 2) throw BadConfig{"--pairs must be >= 2"};
  if (max_steps < 0) throw BadConfig{"--steps must be >= 0"};
  if (workers < 1) throw BadConfig{"--workers must be >= 1"};
  EnsembleResult res = simulate_ensemble(rho, n_pairs, f_target, seed, max_steps, workers);
  json rep;
  rep["command"] = "simulate";
  rep["n_pairs"] = res.n_pairs;
  rep["surviving_pairs"] = res.surviving_pairs;
  rep["expected_pairs"] = res.expected_pairs;
  rep["exact_efficiency"] = res.report.cumulative_efficiency;
  rep["empirical_efficiency"] = res.empirical_efficiency;
  rep["sigma"] = res.sigma;
  rep["within_five_sigma"] = res.within_five_sigma;
  rep["report"] = report_to_json(res.report);
  write_output(out_path, rep.dump(2) + "\n");
  return kExitOk;
}

int cmd_estimate(const DensityMatrix& rho, std::int64_t shots, std::uint64_t seed,
                 const std::string& out_path) {
  if (shots < 0) throw BadConfig{"--shots must be >= 0"};
  DensityMatrix est = estimate_state(rho, shots, seed);
  double err = (est.matrix() - rho.matrix()).norm();
  std::cerr << json{{"frobenius_error", err}}.dump() << "\n";
  write_output(out_path, state_to_json(est).dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"two-qubit entanglement distillation workbench"};
  app.name("qdistill");
  app.require_subcommand(1);

  SourceOpts src;
  std::string out_path;
  bool csv = false;
  double f_target = 0.9;
  int max_steps = 64;
  std::int64_t n_pairs = 0;
  std::uint64_t seed = 0;
  std::int64_t shots = 0;
  int workers = 1;

  CLI::App* analyze = app.add_subcommand("analyze", "separability verdict and filter derivation");
  add_source_flags(analyze, src);
  analyze->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* geometry = app.add_subcommand("geometry", "Pauli-expansion geometry diagnostics");
  add_source_flags(geometry, src);
  geometry->add_option("--out", out_path, "write the report here instead of stdout");
  geometry->add_flag("--csv", csv, "emit the diagonalized T row as CSV");

  CLI::App* distill = app.add_subcommand("distill", "run the distillation pipeline");
  add_source_flags(distill, src);
  distill->add_option("--target", f_target, "fidelity target in (0.5, 1)")->required();
  distill->add_option("--steps", max_steps, "max purification steps (default 64)");
  distill->add_option("--out", out_path, "write the report here instead of stdout");
  distill->add_flag("--csv", csv, "emit stage and trail tables as CSV");

  CLI::App* simulate = app.add_subcommand("simulate", "stochastic pair-level ensemble run");
  add_source_flags(simulate, src);
  simulate->add_option("--target", f_target, "fidelity target in (0.5, 1)")->required();
  simulate->add_option("--pairs", n_pairs, "ensemble size (>= 2)")->required();
  simulate->add_option("--steps", max_steps, "max purification steps (default 64)");
  simulate->add_option("--seed", seed, "RNG seed (default 0)");
  simulate->add_option("--workers", workers, "worker threads; result is worker-count independent");
  simulate->add_option("--out", out_path, "write the report here instead of stdout");

  CLI::App* estimate = app.add_subcommand("estimate", "tomographic estimate from sampled expectations");
  add_source_flags(estimate, src);
  estimate->add_option("--shots", shots, "shots per observable (0 = exact)");
  estimate->add_option("--seed", seed, "RNG seed (default 0)");
  estimate->add_option("--out", out_path, "write the state here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    DensityMatrix rho = load_source(sub, src);
    if (sub == analyze) return cmd_analyze(rho, out_path);
    if (sub == geometry) return cmd_geometry(rho, out_path, csv);
    if (sub == distill) return cmd_distill(rho, f_target, max_steps, out_path, csv);
    if (sub == simulate) return cmd_simulate(rho, n_pairs, f_target, max_steps, seed, workers, out_path);
    return cmd_estimate(rho, shots, seed, out_path);
  } catch (const BadStateFile& e) {
    std::cerr << e.message << "\n";
    return kExitBadState;
  } catch (const BadConfig& e) {
    std::cerr << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::NotDistillable: return kExitNotDistillable;
      case ErrorKind::TargetUnreachable: return kExitTargetUnreachable;
      default: return kExitNumeric;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace qdistill
