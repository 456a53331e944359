#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cadweno/io.hpp"
#include "cadweno/network.hpp"
#include "cadweno/problems.hpp"
#include "cadweno/training.hpp"

#ifndef CADWENO_DEFAULT_WEIGHTS_DIR
#define CADWENO_DEFAULT_WEIGHTS_DIR ""
#endif

namespace cadweno::cli {

namespace fs = std::filesystem;

namespace {

std::string weight_file_for(const std::string& scheme) {
  if (scheme == "weno3-cadnn1") return "cadnn1.json";
  if (scheme == "weno3-cadnn2") return "cadnn2.json";
  return {};
}

struct RunArgs {
  std::string problem;
  std::string scheme;
  std::string weights;
  std::string weights_dir;
  int n = 0;
  int nx = 0;
  int ny = 0;
  double tfinal = 0.0;
  std::string out = ".";
  bool no_reference = false;
  std::string variables = "characteristic";
};

struct ConvergenceArgs {
  std::string problem = "smooth-advection";
  std::string scheme;
  std::string weights;
  std::vector<int> resolutions{40, 80, 160, 320};
  std::string out;
};

struct CompareArgs {
  RunArgs run;
  std::vector<std::string> schemes;
};

struct TrainArgs {
  std::string config;
  std::string output;
  std::string loss_csv;
  bool quiet = false;
};

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

ProblemSpec configured_problem(const RunArgs& a) {
  ProblemSpec p = find_problem(a.problem);
  const int nx = a.n > 0 ? a.n : a.nx;
  std::optional<double> t;
  if (a.tfinal > 0.0) t = a.tfinal;
  if (a.n < 0 || a.nx < 0 || a.ny < 0 || a.tfinal < 0.0) {
    throw std::invalid_argument("resolutions and final time must be positive");
  }
  p.variables = a.variables == "component" ? ReconstructionVariables::kComponent
                                            : ReconstructionVariables::kCharacteristic;
  return with_resolution(p, nx, a.ny, t);
}

struct SchemeOutcome {
  std::string scheme;
  bool ok = false;
  std::string message;
  RunMetadata meta;
};

SchemeOutcome run_one(const ProblemSpec& p, const std::string& scheme, const WeightingStrategy& w,
                      const std::vector<double>& reference, const fs::path& out_dir) {
  SchemeOutcome o;
  o.scheme = scheme;
  const RunResult r = advance(p, w);
  o.meta = {p.name, scheme, p.nx, p.dimension == 2 ? p.ny : 1, p.t_final, r.diagnostics, -1.0, -1.0};
  const std::string stem = p.name + "_" + scheme;
  if (p.dimension == 1) {
    if (!reference.empty()) {
      const ErrorReport e = error_report(r.grid.interior(0), reference, r.grid.dx());
      o.meta.l1 = e.l1;
      o.meta.linf = e.linf;
    }
    write_csv(solution_table(p, r.grid, reference), out_dir / (stem + ".csv"));
  } else {
    const char* names[] = {"rho", "rho_u", "rho_v", "E"};
    for (int c = 0; c < r.grid.ncomp(); ++c) {
      write_field_dump(r.grid, c, r.diagnostics.t, out_dir / (stem + "_" + names[c] + ".dat"));
    }
  }
  write_run_metadata(o.meta, out_dir / (stem + ".json"));
  o.ok = true;
  return o;
}

std::string describe(const RunMetadata& m) {
  std::ostringstream s;
  s << m.problem << " " << m.scheme << " nx=" << m.nx;
  if (m.ny > 1) s << " ny=" << m.ny;
  s << " steps=" << m.diagnostics.steps << " wall=" << std::fixed << std::setprecision(2) << m.diagnostics.wall_seconds
    << "s" << std::scientific << std::setprecision(4);
  if (m.diagnostics.min_density > 0.0) {
    s << " min_rho=" << m.diagnostics.min_density << " min_p=" << m.diagnostics.min_pressure;
  }
  if (m.l1 >= 0.0) s << " L1=" << m.l1 << " Linf=" << m.linf;
  return s.str();
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  const ProblemSpec p = configured_problem(a);
  const WeightingStrategy w = make_scheme(a.scheme, optional_path(a.weights), optional_path(a.weights_dir));
  const std::vector<double> reference = a.no_reference ? std::vector<double>{} : reference_solution(p);
  const SchemeOutcome o = run_one(p, a.scheme, w, reference, a.out);
  out << describe(o.meta) << '\n';
  return kOk;
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const ProblemSpec p = configured_problem(a.run);
  const std::vector<std::string> schemes = a.schemes.empty() ? comparison_schemes() : a.schemes;
  std::vector<std::pair<std::string, WeightingStrategy>> strategies;
  for (const auto& s : schemes) {
    strategies.emplace_back(s, make_scheme(s, std::nullopt, optional_path(a.run.weights_dir)));
  }
  const std::vector<double> reference = a.run.no_reference ? std::vector<double>{} : reference_solution(p);

  CsvTable table;
  table.header = {"scheme_index", "l1", "linf", "steps", "wall_seconds", "min_density", "min_pressure", "ok"};
  bool all_ok = true;
  out << "# scheme_index: ";
  for (std::size_t k = 0; k < schemes.size(); ++k) out << k << "=" << schemes[k] << (k + 1 < schemes.size() ? ", " : "\n");
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    const auto& [name, w] = strategies[k];
    SchemeOutcome o;
    try {
      o = run_one(p, name, w, reference, a.run.out);
      out << describe(o.meta) << '\n';
    } catch (const std::runtime_error& e) {
      all_ok = false;
      err << "cadweno: " << name << " failed: " << e.what() << '\n';
    }
    const auto& d = o.meta.diagnostics;
    table.rows.push_back({static_cast<double>(k), o.meta.l1, o.meta.linf, static_cast<double>(d.steps),
                          d.wall_seconds, d.min_density, d.min_pressure, o.ok ? 1.0 : 0.0});
  }
  write_csv(table, fs::path(a.run.out) / (p.name + "_compare.csv"));
  return all_ok ? kOk : kSolverFailure;
}

int cmd_convergence(const ConvergenceArgs& a, std::ostream& out) {
  const ProblemSpec p = find_problem(a.problem);
  const WeightingStrategy w = make_scheme(a.scheme, optional_path(a.weights));
  if (a.resolutions.size() < 2) throw std::invalid_argument("convergence needs at least two resolutions");
  const std::vector<ConvergenceRow> rows = convergence_study(p, w, a.resolutions);
  CsvTable table;
  table.header = {"n", "l1", "linf", "eoc"};
  out << std::setw(6) << "n" << std::setw(14) << "L1" << std::setw(14) << "Linf" << std::setw(8) << "EOC" << '\n';
  for (const auto& r : rows) {
    table.rows.push_back({static_cast<double>(r.n), r.l1, r.linf, r.eoc});
    out << std::setw(6) << r.n << std::scientific << std::setprecision(4) << std::setw(14) << r.l1 << std::setw(14)
        << r.linf << std::fixed << std::setprecision(2) << std::setw(8) << r.eoc << '\n';
  }
  if (!a.out.empty()) write_csv(table, a.out);
  return kOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  TrainingConfig cfg = parse_training_config(a.config);
  if (!a.output.empty()) cfg.output = a.output;
  if (!a.loss_csv.empty()) cfg.loss_csv = a.loss_csv;
  const Dataset data = generate_dataset(cfg.dataset_seed, cfg.layout);
  out << "training C=" << cfg.hyper.c << " D=" << cfg.hyper.d << " on " << data.samples.size() << " samples, "
      << cfg.hyper.epochs << " epochs\n";
  const int every = std::max(1, cfg.hyper.epochs / 10);
  const TrainingResult r = train(cfg.hyper, data, [&](const EpochRecord& e) {
    if (!a.quiet && (e.epoch == 1 || e.epoch % every == 0)) {
      out << "epoch " << e.epoch << " l_cad=" << e.mean.l_cad << " l_sym=" << e.mean.l_sym << " l_ln=" << e.mean.l_ln
          << " total=" << e.mean.total << '\n';
    }
  });
  save_params(r.params, cfg.output);
  write_loss_history(r.history, cfg.loss_csv);
  out << "best epoch " << r.best_epoch << ", weights written to " << cfg.output.string() << '\n';
  return kOk;
}

template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const UnknownProblemError& e) {
    err << "cadweno: " << e.what() << '\n';
    return kUnknownProblem;
  } catch (const UnknownSchemeError& e) {
    err << "cadweno: " << e.what() << '\n';
    return kUnknownScheme;
  } catch (const MissingWeightsError& e) {
    err << "cadweno: " << e.what() << '\n';
    return kMissingWeights;
  } catch (const WeightFileError& e) {
    err << "cadweno: " << e.what() << '\n';
    return kMissingWeights;
  } catch (const PositivityError& e) {
    err << "cadweno: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const SolverError& e) {
    err << "cadweno: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const TrainingError& e) {
    err << "cadweno: training failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const IoError& e) {
    err << "cadweno: " << e.what() << '\n';
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    err << "cadweno: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::invalid_argument& e) {
    err << "cadweno: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "cadweno: " << e.what() << '\n';
    return kFailure;
  }
}

void add_resolution_flags(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--n", a.n, "Cells in x (1D problems)");
  cmd->add_option("--nx", a.nx, "Cells in x");
  cmd->add_option("--ny", a.ny, "Cells in y (2D problems)");
  cmd->add_option("--tfinal", a.tfinal, "Final time (defaults to the problem's)");
  cmd->add_option("--out", a.out, "Output directory")->capture_default_str();
  cmd->add_flag("--no-reference", a.no_reference, "Skip the reference solution");
  cmd->add_option("--variables", a.variables, "Euler reconstruction variables")
      ->check(CLI::IsMember({"characteristic", "component"}))
      ->capture_default_str();
}

}  // namespace

std::vector<std::string> scheme_names() {
  return {"weno3-js", "weno3-z", "weno3-cadnn1", "weno3-cadnn2", "weno5-js", "weno5-m", "weno3-linear", "weno5-linear"};
}

std::vector<std::string> comparison_schemes() { return {"weno3-z", "weno3-cadnn1", "weno3-cadnn2", "weno5-js"}; }

fs::path resolve_weights(const std::string& scheme, const std::optional<fs::path>& explicit_path,
                         const std::optional<fs::path>& weights_dir) {
  if (explicit_path) {
    if (!fs::exists(*explicit_path)) throw MissingWeightsError("weight file " + explicit_path->string() + " not found");
    return *explicit_path;
  }
  const std::string file = weight_file_for(scheme);
  std::vector<fs::path> candidates;
  if (weights_dir) candidates.push_back(*weights_dir / file);
  if (const char* env = std::getenv("CADWENO_WEIGHTS_DIR"); env != nullptr && *env != '\0') {
    candidates.push_back(fs::path(env) / file);
  }
  if (std::string(CADWENO_DEFAULT_WEIGHTS_DIR).size() > 0) {
    candidates.push_back(fs::path(CADWENO_DEFAULT_WEIGHTS_DIR) / file);
  }
  for (const auto& c : candidates) {
    if (fs::exists(c)) return c;
  }
  throw MissingWeightsError("no weight file for " + scheme + "; pass --weights PATH or set CADWENO_WEIGHTS_DIR");
}

WeightingStrategy make_scheme(const std::string& name, const std::optional<fs::path>& weights,
                              const std::optional<fs::path>& weights_dir) {
  if (name == "weno3-js") return WeightingStrategy::js3();
  if (name == "weno3-z") return WeightingStrategy::z3();
  if (name == "weno3-linear") return WeightingStrategy::linear3();
  if (name == "weno5-js") return WeightingStrategy::js5();
  if (name == "weno5-m") return WeightingStrategy::m5();
  if (name == "weno5-linear") return WeightingStrategy::linear5();
  if (name == "weno3-cadnn1" || name == "weno3-cadnn2") {
    const fs::path path = resolve_weights(name, weights, weights_dir);
    return WeightingStrategy::cadnn(std::make_shared<const NetworkParams>(load_params(path)), name);
  }
  std::string known;
  for (const auto& s : scheme_names()) known += " " + s;
  throw UnknownSchemeError("unknown scheme '" + name + "' (known:" + known + ")");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"WENO schemes with learned weights: training, runs and comparisons", "cadweno"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a weighting network from a config file");
  train_cmd->add_option("config", train_args.config, "Config file (key = value)")->required();
  train_cmd->add_option("--output", train_args.output, "Override the weight file path");
  train_cmd->add_option("--loss-csv", train_args.loss_csv, "Override the loss history path");
  train_cmd->add_flag("--quiet", train_args.quiet, "No per-epoch output");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run one scheme on one problem");
  run_cmd->add_option("--problem", run_args.problem, "Problem name")->required();
  run_cmd->add_option("--scheme", run_args.scheme, "Scheme name")->required();
  run_cmd->add_option("--weights", run_args.weights, "Weight file for learned schemes");
  run_cmd->add_option("--weights-dir", run_args.weights_dir, "Directory holding cadnn1.json / cadnn2.json");
  add_resolution_flags(run_cmd, run_args);

  ConvergenceArgs conv_args;
  auto* conv_cmd = app.add_subcommand("convergence", "Grid refinement study on a smooth advection problem");
  conv_cmd->add_option("--problem", conv_args.problem, "Problem name")->capture_default_str();
  conv_cmd->add_option("--scheme", conv_args.scheme, "Scheme name")->required();
  conv_cmd->add_option("--weights", conv_args.weights, "Weight file for learned schemes");
  conv_cmd->add_option("--resolutions", conv_args.resolutions, "Cell counts")->delimiter(',')->capture_default_str();
  conv_cmd->add_option("--out", conv_args.out, "EOC table CSV path");

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "Run several schemes on one problem and tabulate errors");
  cmp_cmd->add_option("--problem", cmp_args.run.problem, "Problem name")->required();
  cmp_cmd->add_option("--schemes", cmp_args.schemes, "Schemes (default: weno3-z, weno3-cadnn1, weno3-cadnn2, weno5-js)")->delimiter(',');
  cmp_cmd->add_option("--weights-dir", cmp_args.run.weights_dir, "Directory holding cadnn1.json / cadnn2.json");
  add_resolution_flags(cmp_cmd, cmp_args.run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  if (*train_cmd) return guarded([&] { return cmd_train(train_args, out); }, err);
  if (*run_cmd) return guarded([&] { return cmd_run(run_args, out); }, err);
  if (*conv_cmd) return guarded([&] { return cmd_convergence(conv_args, out); }, err);
  if (*cmp_cmd) return guarded([&] { return cmd_compare(cmp_args, out, err); }, err);
  return kBadArguments;
}

}  // namespace cadweno::cli
