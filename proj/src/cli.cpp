#include "linforget/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "linforget/format.hpp"
#include "linforget/oracles.hpp"
#include "linforget/sweep.hpp"

namespace linforget {

namespace {

std::vector<Index> parse_p_grid(const std::string& csv) {
  std::vector<Index> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw Error("bad p-grid entry: '" + item + "'");
    }
    if (used != item.size() || v < 1)
      throw Error("bad p-grid entry: '" + item + "'");
    grid.push_back(static_cast<Index>(v));
  }
  if (grid.empty()) throw Error("empty p-grid");
  return grid;
}

Vector read_theta_file(const std::string& path, Index d) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open theta file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  if (static_cast<Index>(values.size()) != d)
    throw Error("theta file " + path + " has " +
                std::to_string(values.size()) + " entries, expected d=" +
                std::to_string(d));
  Vector theta(d);
  for (Index i = 0; i < d; ++i)
    theta(i) = values[static_cast<std::size_t>(i)];
  return theta;
}

std::string trim(const std::string& s) {
  const std::size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const std::size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// One assignable key of a flat key=value config file.
struct ConfigKey {
  std::string key;
  std::function<void(const std::string&)> set;
};

Index to_index(const std::string& v) {
  std::size_t used = 0;
  const long long parsed = std::stoll(v, &used);
  if (used != v.size() || parsed < 0) throw Error("bad integer: '" + v + "'");
  return static_cast<Index>(parsed);
}

std::uint64_t to_u64(const std::string& v) {
  std::size_t used = 0;
  const unsigned long long parsed = std::stoull(v, &used);
  if (used != v.size()) throw Error("bad integer: '" + v + "'");
  return parsed;
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  const double parsed = std::stod(v, &used);
  if (used != v.size()) throw Error("bad number: '" + v + "'");
  return parsed;
}

// Applies file values for every key whose flag was not given on the command
// line, so explicit flags always win.
void apply_config_file(const CLI::App* cmd, const std::string& path,
                       const std::vector<ConfigKey>& keys) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw Error(path + ":" + std::to_string(lineno) +
                  ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    bool known = false;
    for (const ConfigKey& entry : keys) {
      if (entry.key != key) continue;
      known = true;
      if (cmd->count("--" + key) == 0) entry.set(value);
      break;
    }
    if (!known)
      throw Error(path + ":" + std::to_string(lineno) +
                  ": unknown config key '" + key + "'");
  }
}

// --theta takes either "gaussian" or "fixed:<file>".
void apply_theta_flag(const std::string& flag, Index d, SweepSpec* spec) {
  if (flag == "gaussian") {
    spec->theta_mode = ThetaMode::kGaussian;
    return;
  }
  if (flag.rfind("fixed:", 0) == 0) {
    spec->theta_mode = ThetaMode::kFixed;
    spec->theta_fixed = read_theta_file(flag.substr(6), d);
    return;
  }
  throw Error("--theta must be 'gaussian' or 'fixed:<file>', got '" + flag +
              "'");
}

struct SweepArgs {
  std::string config;
  Index d = 20;
  Index n = 100;
  double gamma = 1.0;
  std::string p_grid = "200,350,500,1000,2000";
  Index reps = 100;
  std::string relation = "orthogonal";
  std::uint64_t seed = 1;
  std::string theta = "gaussian";
  std::string out = "sweep.csv";
  std::string plot;
};

struct OracleArgs {
  std::string config;
  std::string profile = "quick";
  std::uint64_t seed = 1;
  std::string out;
};

struct BoundArgs {
  std::string config;
  Index d = 20;
  Index n = 100;
  Index p = 2000;
  double gamma = 1.0;
  double theta_norm2 = 20.0;
};

struct RiskCheckArgs {
  std::string config;
  Index d = 20;
  Index n = 100;
  Index p = 500;
  double gamma = 1.0;
  std::string relation = "orthogonal";
  std::uint64_t seed = 1;
  std::string theta = "gaussian";
};

int do_sweep(const SweepArgs& args, std::ostream& out) {
  SweepSpec spec;
  spec.d = args.d;
  spec.n = args.n;
  spec.gamma = args.gamma;
  spec.p_grid = parse_p_grid(args.p_grid);
  spec.reps = args.reps;
  spec.relation = task_relation_from_string(args.relation);
  spec.master_seed = args.seed;
  spec.output_path = args.out;
  apply_theta_flag(args.theta, args.d, &spec);

  const SweepResult result = run_sweep(spec);
  emit_csv(result, spec.output_path);
  out << "wrote " << spec.output_path << " and " << spec.output_path
      << ".summary.csv (" << result.rows.size() << " rows)\n";
  if (!args.plot.empty()) {
    emit_plot(result, args.plot);
    out << "wrote " << args.plot << "\n";
  }
  return 0;
}

int do_oracles(const OracleArgs& args, std::ostream& out) {
  if (args.profile != "quick" && args.profile != "full")
    throw Error("--profile must be 'quick' or 'full', got '" + args.profile +
                "'");
  const OracleProfile profile = args.profile == "full"
                                    ? OracleProfile::kFull
                                    : OracleProfile::kQuick;
  const std::vector<LemmaVerdict> verdicts =
      run_all_oracles(profile, args.seed);
  out << format_verdict_table(verdicts);
  if (!args.out.empty()) {
    write_verdicts_csv(verdicts, args.out);
    out << "wrote " << args.out << "\n";
  }
  return all_passed(verdicts) ? 0 : 2;
}

int do_bound(const BoundArgs& args, std::ostream& out) {
  const BoundResult result =
      theorem_bound(args.d, args.n, args.p, args.gamma, args.theta_norm2);
  out << "bound=" << format_double(result.bound) << "\n";
  out << "applicable=" << (result.applicable ? "true" : "false") << "\n";
  for (const std::string& reason : result.reasons)
    out << "reason: " << reason << "\n";
  return 0;
}

int do_risk_check(const RiskCheckArgs& args, std::ostream& out) {
  ModelConfig config;
  config.d = args.d;
  config.n = args.n;
  config.p = args.p;
  config.gamma = args.gamma;
  config.relation = task_relation_from_string(args.relation);
  config.seed = args.seed;
  if (args.theta == "gaussian") {
    SeededRng theta_rng = SeededRng(config.seed).substream(0);
    config.theta = sample_theta(args.d, theta_rng);
  } else if (args.theta.rfind("fixed:", 0) == 0) {
    config.theta = read_theta_file(args.theta.substr(6), args.d);
  } else {
    throw Error("--theta must be 'gaussian' or 'fixed:<file>'");
  }

  const TaskPair tasks = generate_task_pair(config);
  const EstimatorSet est = fit_sequential(tasks);
  const ArmQuantities arm =
      arm_quantities(tasks.w, config.theta, config.gamma);
  const RiskReport report = performance_drop(tasks, est, arm);

  out << "d=" << config.d << " n=" << config.n << " p=" << config.p
      << " gamma=" << format_double(config.gamma) << " relation="
      << to_string(config.relation) << " seed=" << config.seed << "\n";
  out << "risk_null=" << format_double(report.risk_null) << "\n";
  out << "risk_A=" << format_double(report.risk_a) << "\n";
  out << "risk_BA=" << format_double(report.risk_ba) << "\n";
  out << "drop=" << format_double(report.drop) << "\n";
  out << "bound=" << format_double(report.bound) << "\n";
  out << "bound_applicable=" << (report.bound_applicable ? "true" : "false")
      << "\n";
  out << "term_I=" << format_double(report.term_i) << "\n";
  out << "term_II=" << format_double(report.term_ii) << "\n";
  out << "term_III=" << format_double(report.term_iii) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "linforget: exact risks and forgetting bounds for sequential "
      "min-norm regression on two related tasks"};
  app.require_subcommand(1);

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "risk curves over a grid of observed dimensions");
  sweep_cmd->add_option("--config", sweep_args.config,
                        "flat key=value file mirroring the flags (flags win)");
  sweep_cmd->add_option("--d", sweep_args.d, "latent dimension");
  sweep_cmd->add_option("--n", sweep_args.n, "examples per task");
  sweep_cmd->add_option("--gamma", sweep_args.gamma, "projection scale");
  sweep_cmd->add_option("--p-grid", sweep_args.p_grid,
                        "comma-separated observed dimensions");
  sweep_cmd->add_option("--reps", sweep_args.reps, "replications per p");
  sweep_cmd->add_option("--relation", sweep_args.relation,
                        "task-B transform")
      ->check(CLI::IsMember({"orthogonal", "permutation", "identity"}));
  sweep_cmd->add_option("--seed", sweep_args.seed, "master seed");
  sweep_cmd->add_option("--theta", sweep_args.theta,
                        "'gaussian' or 'fixed:<file>'");
  sweep_cmd->add_option("--out", sweep_args.out, "output CSV path");
  sweep_cmd->add_option("--plot", sweep_args.plot, "optional SVG path");

  OracleArgs oracle_args;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracles", "Monte Carlo verification battery");
  oracle_cmd->add_option("--config", oracle_args.config,
                         "flat key=value file mirroring the flags (flags win)");
  oracle_cmd->add_option("--profile", oracle_args.profile, "trial budget")
      ->check(CLI::IsMember({"quick", "full"}));
  oracle_cmd->add_option("--seed", oracle_args.seed, "master seed");
  oracle_cmd->add_option("--out", oracle_args.out, "verdict CSV path");

  BoundArgs bound_args;
  CLI::App* bound_cmd = app.add_subcommand(
      "bound", "evaluate the forgetting bound and its preconditions");
  bound_cmd->add_option("--config", bound_args.config,
                        "flat key=value file mirroring the flags (flags win)");
  bound_cmd->add_option("--d", bound_args.d, "latent dimension");
  bound_cmd->add_option("--n", bound_args.n, "examples per task");
  bound_cmd->add_option("--p", bound_args.p, "observed dimension");
  bound_cmd->add_option("--gamma", bound_args.gamma, "projection scale");
  bound_cmd->add_option("--theta-norm2", bound_args.theta_norm2,
                        "||theta||^2");

  RiskCheckArgs risk_args;
  CLI::App* risk_cmd = app.add_subcommand(
      "risk-check", "fit one instance and print its risk report");
  risk_cmd->add_option("--config", risk_args.config,
                       "flat key=value file mirroring the flags (flags win)");
  risk_cmd->add_option("--d", risk_args.d, "latent dimension");
  risk_cmd->add_option("--n", risk_args.n, "examples per task");
  risk_cmd->add_option("--p", risk_args.p, "observed dimension");
  risk_cmd->add_option("--gamma", risk_args.gamma, "projection scale");
  risk_cmd->add_option("--relation", risk_args.relation, "task-B transform")
      ->check(CLI::IsMember({"orthogonal", "permutation", "identity"}));
  risk_cmd->add_option("--seed", risk_args.seed, "instance seed");
  risk_cmd->add_option("--theta", risk_args.theta,
                       "'gaussian' or 'fixed:<file>'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep_cmd->parsed()) {
      if (!sweep_args.config.empty())
        apply_config_file(
            sweep_cmd, sweep_args.config,
            {{"d", [&](const std::string& v) { sweep_args.d = to_index(v); }},
             {"n", [&](const std::string& v) { sweep_args.n = to_index(v); }},
             {"gamma",
              [&](const std::string& v) { sweep_args.gamma = to_double(v); }},
             {"p-grid",
              [&](const std::string& v) { sweep_args.p_grid = v; }},
             {"reps",
              [&](const std::string& v) { sweep_args.reps = to_index(v); }},
             {"relation",
              [&](const std::string& v) { sweep_args.relation = v; }},
             {"seed",
              [&](const std::string& v) { sweep_args.seed = to_u64(v); }},
             {"theta", [&](const std::string& v) { sweep_args.theta = v; }},
             {"out", [&](const std::string& v) { sweep_args.out = v; }},
             {"plot", [&](const std::string& v) { sweep_args.plot = v; }}});
      return do_sweep(sweep_args, out);
    }
    if (oracle_cmd->parsed()) {
      if (!oracle_args.config.empty())
        apply_config_file(
            oracle_cmd, oracle_args.config,
            {{"profile",
              [&](const std::string& v) { oracle_args.profile = v; }},
             {"seed",
              [&](const std::string& v) { oracle_args.seed = to_u64(v); }},
             {"out", [&](const std::string& v) { oracle_args.out = v; }}});
      return do_oracles(oracle_args, out);
    }
    if (bound_cmd->parsed()) {
      if (!bound_args.config.empty())
        apply_config_file(
            bound_cmd, bound_args.config,
            {{"d", [&](const std::string& v) { bound_args.d = to_index(v); }},
             {"n", [&](const std::string& v) { bound_args.n = to_index(v); }},
             {"p", [&](const std::string& v) { bound_args.p = to_index(v); }},
             {"gamma",
              [&](const std::string& v) { bound_args.gamma = to_double(v); }},
             {"theta-norm2", [&](const std::string& v) {
                bound_args.theta_norm2 = to_double(v);
              }}});
      return do_bound(bound_args, out);
    }
    if (risk_cmd->parsed()) {
      if (!risk_args.config.empty())
        apply_config_file(
            risk_cmd, risk_args.config,
            {{"d", [&](const std::string& v) { risk_args.d = to_index(v); }},
             {"n", [&](const std::string& v) { risk_args.n = to_index(v); }},
             {"p", [&](const std::string& v) { risk_args.p = to_index(v); }},
             {"gamma",
              [&](const std::string& v) { risk_args.gamma = to_double(v); }},
             {"relation",
              [&](const std::string& v) { risk_args.relation = v; }},
             {"seed",
              [&](const std::string& v) { risk_args.seed = to_u64(v); }},
             {"theta",
              [&](const std::string& v) { risk_args.theta = v; }}});
      return do_risk_check(risk_args, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace linforget
