#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linforget/theory.hpp"

namespace linforget {

enum class ThetaMode { kGaussian, kFixed };

/// A seeded grid experiment over the observed dimension p.
struct SweepSpec {
  Index d = 20;
  Index n = 100;
  double gamma = 1.0;
  ThetaMode theta_mode = ThetaMode::kGaussian;
  Vector theta_fixed;  // used when theta_mode == kFixed; size d
  std::vector<Index> p_grid = {200, 350, 500, 1000, 2000};
  Index reps = 100;
  TaskRelation relation = TaskRelation::kOrthogonal;
  std::uint64_t master_seed = 0;
  std::string output_path;

  void validate() const;
};

struct SweepRow {
  Index p;
  Index rep;
  std::uint64_t seed;  // derived per-cell seed, reproduces the cell alone
  double risk_null;
  double risk_a;
  double risk_ba;
  double drop;
  double bound;
  bool bound_applicable;
};

struct SweepSummaryRow {
  Index p;
  double mean_risk_a;
  double se_risk_a;
  double mean_risk_ba;
  double se_risk_ba;
  double mean_drop;
  double se_drop;
};

struct SweepResult {
  std::vector<SweepRow> rows;          // sorted by (p, rep)
  std::vector<SweepSummaryRow> summary;  // one row per grid point
};

/// Runs every (p, rep) cell on a worker pool (0 = LINFORGET_WORKERS or
/// hardware). Each cell derives its own stream from
/// (master_seed, p_index << 32 | rep), so the result is identical for any
/// worker count and execution order.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 0);

/// Data CSV with header p,rep,seed,risk_null,risk_A,risk_BA,drop,bound,
/// bound_applicable (17-significant-digit values, rows sorted by (p, rep),
/// trailing newline) plus a sibling `<path>.summary.csv`.
void emit_csv(const SweepResult& result, const std::string& path);

/// Self-contained SVG: log-scaled risk axis, null risk as a dashed
/// horizontal line, mean task-A risk and mean sequential risk against p.
void emit_plot(const SweepResult& result, const std::string& path);

}  // namespace linforget
