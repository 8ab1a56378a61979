#include "linforget/sweep.hpp"

#include <cmath>
#include <fstream>

#include "linforget/format.hpp"
#include "linforget/parallel.hpp"

namespace linforget {

namespace {

constexpr std::uint64_t kThetaStream = 0;

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_and_se(const std::vector<double>& values) {
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

}  // namespace

void SweepSpec::validate() const {
  if (p_grid.empty()) throw Error("SweepSpec: empty p grid");
  Index last = n;
  for (Index p : p_grid) {
    if (p <= last)
      throw Error("SweepSpec: p grid must be strictly increasing and > n");
    last = p;
  }
  if (reps < 1) throw Error("SweepSpec: reps must be >= 1");
  if (theta_mode == ThetaMode::kFixed && theta_fixed.size() != d)
    throw InvalidDimensionError(
        "SweepSpec: fixed theta has size " +
        std::to_string(theta_fixed.size()) + ", expected d=" +
        std::to_string(d));
  // Dimension constraints are enforced per cell by ModelConfig; fail fast
  // here with the first grid point.
  ModelConfig probe;
  probe.d = d;
  probe.n = n;
  probe.p = p_grid.front();
  probe.gamma = gamma;
  probe.theta = Vector::Zero(d);
  probe.validate();
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  const std::size_t grid_size = spec.p_grid.size();
  const std::size_t cells = grid_size * static_cast<std::size_t>(spec.reps);

  SweepResult result;
  result.rows.resize(cells);

  parallel_for(cells, workers, [&](std::size_t cell) {
    const std::size_t p_index = cell / static_cast<std::size_t>(spec.reps);
    const Index rep = static_cast<Index>(
        cell % static_cast<std::size_t>(spec.reps));
    const std::uint64_t cell_stream =
        (static_cast<std::uint64_t>(p_index) << 32) |
        static_cast<std::uint64_t>(rep);
    const std::uint64_t cell_seed =
        SeededRng::mix(spec.master_seed, cell_stream);

    ModelConfig config;
    config.d = spec.d;
    config.n = spec.n;
    config.p = spec.p_grid[p_index];
    config.gamma = spec.gamma;
    config.relation = spec.relation;
    config.seed = cell_seed;
    if (spec.theta_mode == ThetaMode::kGaussian) {
      SeededRng theta_rng = SeededRng(cell_seed).substream(kThetaStream);
      config.theta = sample_theta(spec.d, theta_rng);
    } else {
      config.theta = spec.theta_fixed;
    }

    try {
      const TaskPair tasks = generate_task_pair(config);
      const EstimatorSet est = fit_sequential(tasks);
      const ArmQuantities arm =
          arm_quantities(tasks.w, config.theta, config.gamma);
      const RiskReport report = performance_drop(tasks, est, arm);

      SweepRow& row = result.rows[cell];
      row.p = config.p;
      row.rep = rep;
      row.seed = cell_seed;
      row.risk_null = report.risk_null;
      row.risk_a = report.risk_a;
      row.risk_ba = report.risk_ba;
      row.drop = report.drop;
      row.bound = report.bound;
      row.bound_applicable = report.bound_applicable;
    } catch (const Error& e) {
      throw Error("sweep cell failed (p=" + std::to_string(config.p) +
                  ", rep=" + std::to_string(rep) + ", seed=" +
                  std::to_string(cell_seed) + "): " + e.what());
    }
  });

  result.summary.reserve(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    std::vector<double> risk_a, risk_ba, drop;
    risk_a.reserve(spec.reps);
    risk_ba.reserve(spec.reps);
    drop.reserve(spec.reps);
    for (Index r = 0; r < spec.reps; ++r) {
      const SweepRow& row =
          result.rows[g * static_cast<std::size_t>(spec.reps) +
                      static_cast<std::size_t>(r)];
      risk_a.push_back(row.risk_a);
      risk_ba.push_back(row.risk_ba);
      drop.push_back(row.drop);
    }
    const MeanSe a = mean_and_se(risk_a);
    const MeanSe ba = mean_and_se(risk_ba);
    const MeanSe dr = mean_and_se(drop);
    result.summary.push_back(SweepSummaryRow{spec.p_grid[g], a.mean, a.se,
                                             ba.mean, ba.se, dr.mean, dr.se});
  }
  return result;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "p,rep,seed,risk_null,risk_A,risk_BA,drop,bound,bound_applicable\n";
  for (const SweepRow& row : result.rows) {
    out << row.p << ',' << row.rep << ',' << row.seed << ','
        << format_double(row.risk_null) << ',' << format_double(row.risk_a)
        << ',' << format_double(row.risk_ba) << ','
        << format_double(row.drop) << ',' << format_double(row.bound) << ','
        << (row.bound_applicable ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);

  const std::string summary_path = path + ".summary.csv";
  std::ofstream sum(summary_path, std::ios::binary);
  if (!sum) throw IoError("cannot open for writing: " + summary_path);
  sum << "p,mean_risk_A,se_risk_A,mean_risk_BA,se_risk_BA,mean_drop,"
         "se_drop\n";
  for (const SweepSummaryRow& row : result.summary) {
    sum << row.p << ',' << format_double(row.mean_risk_a) << ','
        << format_double(row.se_risk_a) << ','
        << format_double(row.mean_risk_ba) << ','
        << format_double(row.se_risk_ba) << ','
        << format_double(row.mean_drop) << ','
        << format_double(row.se_drop) << '\n';
  }
  if (!sum) throw IoError("write failed: " + summary_path);
}

}  // namespace linforget
