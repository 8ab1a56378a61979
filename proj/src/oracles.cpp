#include "linforget/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "linforget/estimate.hpp"
#include "linforget/format.hpp"
#include "linforget/parallel.hpp"
#include "linforget/theory.hpp"

namespace linforget {

namespace {

constexpr std::uint64_t kProbeStream = 100;

// Every trial reduces to a violation ratio; pass iff ratio <= 1.
LemmaVerdict aggregate(LemmaId id, double threshold,
                       const std::vector<double>& ratios) {
  LemmaVerdict v;
  v.lemma = id;
  v.trials = static_cast<std::int64_t>(ratios.size());
  v.passes = 0;
  v.worst_margin = 0.0;
  for (double r : ratios) {
    if (r <= 1.0) ++v.passes;
    v.worst_margin = std::max(v.worst_margin, r);
  }
  v.pass_rate =
      v.trials > 0 ? static_cast<double>(v.passes) / v.trials : 0.0;
  v.threshold = threshold;
  return v;
}

template <typename TrialFn>
LemmaVerdict run_trials(LemmaId id, double threshold, std::int64_t trials,
                        unsigned workers, const SeededRng& base,
                        TrialFn&& trial) {
  std::vector<double> ratios(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), workers,
               [&](std::size_t i) {
                 SeededRng rng = base.substream(i);
                 ratios[i] = trial(rng, i);
               });
  return aggregate(id, threshold, ratios);
}

}  // namespace

const char* to_string(LemmaId id) {
  switch (id) {
    case LemmaId::kRowNormMoment: return "RowNormMoment";
    case LemmaId::kGaussNormConc: return "GaussNormConc";
    case LemmaId::kProjWHaar: return "ProjW_Haar";
    case LemmaId::kProjBHaar: return "ProjB_Haar";
    case LemmaId::kSigmaMin: return "SigmaMin";
    case LemmaId::kPinvNoise: return "PinvNoise";
    case LemmaId::kBetaLower: return "BetaLower";
    case LemmaId::kPushThrough: return "PushThrough";
    case LemmaId::kNullRisk: return "NullRisk";
    case LemmaId::kCovEquiv: return "CovEquiv";
  }
  return "?";
}

LemmaVerdict check_gauss_norm_concentration(Index dim, double eps,
                                            std::int64_t trials,
                                            SeededRng rng, unsigned workers) {
  if (dim < 1) throw InvalidDimensionError("gauss_norm: dim must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0))
    throw Error("gauss_norm: eps must be in (0, 1]");
  return run_trials(LemmaId::kGaussNormConc, 0.999, trials, workers, rng,
                    [=](SeededRng& trng, std::size_t) {
                      const double sq =
                          gaussian_vector(dim, trng).squaredNorm();
                      return std::abs(sq / static_cast<double>(dim) - 1.0) /
                             eps;
                    });
}

LemmaVerdict check_proj_w_haar(Index d, Index p, std::int64_t trials,
                               SeededRng rng, ProbeVector probe,
                               unsigned workers) {
  if (d < 1 || d > p)
    throw InvalidDimensionError("proj_w: need 1 <= d <= p");
  Vector v = Vector::Zero(p);
  if (probe == ProbeVector::kFirstBasis) {
    v(0) = 1.0;
  } else {
    SeededRng vrng = rng.substream(kProbeStream);
    v = gaussian_vector(p, vrng).normalized();
  }
  const double limit =
      2.0 * static_cast<double>(d) / static_cast<double>(p);
  return run_trials(
      LemmaId::kProjWHaar, 0.99, trials, workers, rng,
      [&, limit](SeededRng& trng, std::size_t) {
        const Matrix w = make_w(d, p, 1.0, trng);
        const HaarRotation<double> o(p, trng);
        const Vector rotated = o.apply(v);
        const double proj_sq = (w.transpose() * rotated).squaredNorm() /
                               static_cast<double>(p);
        return proj_sq / limit;
      });
}

LemmaVerdict check_proj_b_haar(const ModelConfig& config, std::int64_t trials,
                               unsigned workers) {
  config.validate();
  const double limit = 2.0 * static_cast<double>(config.n) /
                       static_cast<double>(config.p);
  return run_trials(
      LemmaId::kProjBHaar, 0.99, trials, workers, SeededRng(config.seed),
      [&, limit](SeededRng&, std::size_t i) {
        ModelConfig cfg = config;
        cfg.seed = SeededRng::mix(config.seed, i);
        const TaskPair tasks = generate_task_pair(cfg);
        const RowSpaceSolver<double> solver_a(tasks.x_a);
        const RowSpaceSolver<double> solver_b(tasks.x_b);
        SeededRng wrng = SeededRng(cfg.seed).substream(kProbeStream);
        const Vector probe = gaussian_vector(config.p, wrng);
        const Vector v = solver_a.project_row_space(probe);
        const double proj_sq =
            std::max(0.0, solver_b.row_space_squared_norm(v));
        return proj_sq / (limit * v.squaredNorm());
      });
}

namespace {

// X_A alone (no task transform), drawn the way generate_task_pair draws it.
Matrix sample_task_a(const ModelConfig& config, SeededRng& rng, Matrix* w_out) {
  Matrix w = make_w(config.d, config.p, config.gamma, rng);
  Matrix z = gaussian_matrix(config.n, config.d, rng);
  Matrix x = gaussian_matrix(config.n, config.p, rng);
  x.noalias() += z * w.transpose();
  if (w_out) *w_out = std::move(w);
  return x;
}

double sigma_min_rhs(const ModelConfig& config) {
  const double root =
      std::sqrt(static_cast<double>(config.p - config.d)) -
      2.0 * std::sqrt(static_cast<double>(config.n));
  return root * root;
}

void require_informative(const ModelConfig& config, const char* who) {
  if (config.p <= config.d + 4 * config.n)
    throw Error(std::string(who) +
                ": need p > d + 4n for an informative bound");
}

}  // namespace

LemmaVerdict check_sigma_min(const ModelConfig& config, std::int64_t trials,
                             unsigned workers) {
  config.validate();
  require_informative(config, "check_sigma_min");
  const double rhs = sigma_min_rhs(config);
  return run_trials(LemmaId::kSigmaMin, 0.99, trials, workers,
                    SeededRng(config.seed),
                    [&, rhs](SeededRng& trng, std::size_t) {
                      const Matrix x = sample_task_a(config, trng, nullptr);
                      Matrix gram = Matrix::Zero(config.n, config.n);
                      gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
                      Eigen::SelfAdjointEigenSolver<Matrix> es(
                          gram, Eigen::EigenvaluesOnly);
                      const double smallest = es.eigenvalues()(0);
                      return rhs / smallest;
                    });
}

LemmaVerdict check_pinv_noise(const ModelConfig& config, std::int64_t trials,
                              unsigned workers) {
  config.validate();
  require_informative(config, "check_pinv_noise");
  const double theta2 = config.theta_norm2();
  const double rhs = static_cast<double>(config.n) * theta2 /
                     (static_cast<double>(config.p) * config.gamma *
                      sigma_min_rhs(config));
  return run_trials(
      LemmaId::kPinvNoise, 0.99, trials, workers, SeededRng(config.seed),
      [&, rhs](SeededRng& trng, std::size_t) {
        Matrix w;
        const Matrix x = sample_task_a(config, trng, &w);
        const ArmQuantities arm =
            arm_quantities(w, config.theta, config.gamma);
        Vector eps = gaussian_vector(config.n, trng) * std::sqrt(arm.sigma2);
        const RowSpaceSolver<double> solver(x);
        const double lhs = solver.min_norm(eps).squaredNorm();
        if (rhs == 0.0) return lhs > 0.0 ? 2.0 : 0.0;
        return lhs / rhs;
      });
}

LemmaVerdict check_beta_lower(std::int64_t trials, SeededRng rng,
                              unsigned workers) {
  return run_trials(
      LemmaId::kBetaLower, 1.0, trials, workers, rng,
      [](SeededRng& trng, std::size_t) {
        const Index d = 1 + static_cast<Index>(trng.next_below(20));
        const Index n = d + static_cast<Index>(trng.next_below(180));
        const double gamma = std::exp(
            std::log(0.05) + trng.next_uniform() * std::log(5.0 / 0.05));
        const Index floor = std::max<Index>(
            16 * n + d, static_cast<Index>(std::ceil(1.0 / gamma)));
        const Index p = floor + static_cast<Index>(trng.next_below(
                                    static_cast<std::uint64_t>(3 * n)));
        const Vector theta = gaussian_vector(d, trng);
        Matrix w = make_w(d, p, gamma, trng);
        const ArmQuantities arm = arm_quantities(w, theta, gamma);
        const double lhs =
            std::sqrt(static_cast<double>(n)) * theta.norm() /
            (std::sqrt(static_cast<double>(p) * gamma) *
             (std::sqrt(static_cast<double>(p - d)) -
              2.0 * std::sqrt(static_cast<double>(n))));
        return lhs / arm.beta.norm();
      });
}

LemmaVerdict check_push_through(Index d, Index p, std::int64_t trials,
                                SeededRng rng, unsigned workers) {
  if (p > 500)
    throw InvalidDimensionError(
        "check_push_through: p capped at 500 (dense inverse)");
  if (d < 1 || d > p)
    throw InvalidDimensionError("check_push_through: need 1 <= d <= p");
  return run_trials(
      LemmaId::kPushThrough, 1.0, trials, workers, rng,
      [=](SeededRng& trng, std::size_t) {
        Matrix w = gaussian_matrix(p, d, trng) /
                   std::sqrt(static_cast<double>(p));
        Matrix left =
            (Matrix::Identity(p, p) + w * w.transpose()).inverse() * w;
        Matrix right =
            w * (w.transpose() * w + Matrix::Identity(d, d)).inverse();
        const double scale = std::max(1e-300, right.cwiseAbs().maxCoeff());
        const double resid = (left - right).cwiseAbs().maxCoeff() / scale;
        return resid / 1e-9;
      });
}

LemmaVerdict check_null_risk(std::int64_t trials, SeededRng rng,
                             unsigned workers) {
  return run_trials(
      LemmaId::kNullRisk, 1.0, trials, workers, rng,
      [](SeededRng& trng, std::size_t) {
        const Index d = 1 + static_cast<Index>(trng.next_below(50));
        const Index p =
            d + 2 + static_cast<Index>(trng.next_below(
                        static_cast<std::uint64_t>(3000 - d - 1)));
        const double gamma = std::exp(
            std::log(0.01) + trng.next_uniform() * std::log(10.0 / 0.01));
        const Vector theta = gaussian_vector(d, trng);
        Matrix w = make_w(d, p, gamma, trng);
        const ArmQuantities arm = arm_quantities(w, theta, gamma);
        const double null_risk = risk(Vector::Zero(p), arm);
        const double rel =
            std::abs(null_risk - theta.squaredNorm()) / theta.squaredNorm();
        return rel / 1e-9;
      });
}

LemmaVerdict check_row_norm_moment(Index d, Index p, double gamma,
                                   std::int64_t samples, SeededRng rng) {
  Matrix w = make_w(d, p, gamma, rng);
  const Vector theta = Vector::Zero(d);
  double sum = 0.0;
  stream_lsm_rows(w, theta, samples, 2048, rng,
                  [&](const Matrix& x, const Vector&) {
                    sum += x.rowwise().squaredNorm().sum();
                  });
  const double expected =
      static_cast<double>(d) * static_cast<double>(p) * gamma +
      static_cast<double>(p);
  const double rel =
      std::abs(sum / static_cast<double>(samples) - expected) / expected;

  LemmaVerdict v;
  v.lemma = LemmaId::kRowNormMoment;
  v.trials = samples;
  v.passes = rel <= 0.02 ? samples : 0;
  v.pass_rate = rel <= 0.02 ? 1.0 : 0.0;
  v.worst_margin = rel / 0.02;
  v.threshold = 1.0;
  return v;
}

LemmaVerdict check_cov_equivalence(const ModelConfig& config, Index samples) {
  const CovarianceCheck check = lsm_arm_covariance_check(config, samples);
  const double errs[3] = {check.err_yy, check.err_xy, check.err_xx};

  LemmaVerdict v;
  v.lemma = LemmaId::kCovEquiv;
  v.trials = 3;
  v.passes = 0;
  v.worst_margin = 0.0;
  for (double e : errs) {
    if (e <= 0.05) ++v.passes;
    v.worst_margin = std::max(v.worst_margin, e / 0.05);
  }
  v.pass_rate = static_cast<double>(v.passes) / 3.0;
  v.threshold = 1.0;
  return v;
}

std::vector<LemmaVerdict> run_all_oracles(OracleProfile profile,
                                          std::uint64_t master_seed,
                                          unsigned workers) {
  const std::int64_t trials =
      profile == OracleProfile::kQuick ? 100 : 1000;
  auto seed_for = [master_seed](std::uint64_t check) {
    return SeededRng::mix(master_seed, check);
  };

  auto make_config = [&](Index d, Index n, Index p, double gamma,
                         std::uint64_t seed) {
    ModelConfig cfg;
    cfg.d = d;
    cfg.n = n;
    cfg.p = p;
    cfg.gamma = gamma;
    cfg.seed = seed;
    SeededRng trng = SeededRng(seed).substream(kProbeStream + 1);
    cfg.theta = sample_theta(d, trng);
    return cfg;
  };

  std::vector<LemmaVerdict> verdicts;
  verdicts.push_back(check_row_norm_moment(20, 500, 1.0, 10000,
                                           SeededRng(seed_for(0))));
  verdicts.push_back(check_gauss_norm_concentration(
      1000, 0.3, trials, SeededRng(seed_for(1)), workers));
  verdicts.push_back(check_proj_w_haar(20, 2000, trials,
                                       SeededRng(seed_for(2)),
                                       ProbeVector::kRandom, workers));
  verdicts.push_back(check_proj_b_haar(
      make_config(20, 100, 2000, 1.0, seed_for(3)), trials, workers));
  verdicts.push_back(check_sigma_min(
      make_config(20, 100, 2000, 1.0, seed_for(4)), trials, workers));
  verdicts.push_back(check_pinv_noise(
      make_config(20, 100, 2000, 1.0, seed_for(5)), trials, workers));
  verdicts.push_back(
      check_beta_lower(trials, SeededRng(seed_for(6)), workers));
  verdicts.push_back(check_push_through(10, 150, trials,
                                        SeededRng(seed_for(7)), workers));
  verdicts.push_back(check_null_risk(trials, SeededRng(seed_for(8)), workers));
  verdicts.push_back(check_cov_equivalence(
      make_config(5, 20, 30, 1.0, seed_for(9)),
      profile == OracleProfile::kQuick ? 20000 : 100000));

  // The 0.99 contracts are stated for the full profile. At 100 trials the
  // 1% allowance is a single trial, so the quick smoke run gets binomial
  // headroom instead of a coin-flip verdict.
  if (profile == OracleProfile::kQuick)
    for (auto& v : verdicts)
      if (v.threshold == 0.99) v.threshold = 0.97;
  return verdicts;
}

bool all_passed(const std::vector<LemmaVerdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const LemmaVerdict& v) { return v.passed(); });
}

void write_verdicts_csv(const std::vector<LemmaVerdict>& verdicts,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "lemma_id,trials,passes,pass_rate,worst_margin,threshold,status\n";
  for (const auto& v : verdicts) {
    out << to_string(v.lemma) << ',' << v.trials << ',' << v.passes << ','
        << format_double(v.pass_rate) << ',' << format_double(v.worst_margin)
        << ',' << format_double(v.threshold) << ','
        << (v.passed() ? "pass" : "fail") << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string format_verdict_table(const std::vector<LemmaVerdict>& verdicts) {
  std::ostringstream os;
  os << std::left << std::setw(15) << "lemma" << std::right << std::setw(8)
     << "trials" << std::setw(8) << "passes" << std::setw(11) << "rate"
     << std::setw(12) << "worst" << std::setw(11) << "required"
     << "  status\n";
  os << std::setprecision(4) << std::fixed;
  for (const auto& v : verdicts) {
    os << std::left << std::setw(15) << to_string(v.lemma) << std::right
       << std::setw(8) << v.trials << std::setw(8) << v.passes
       << std::setw(11) << v.pass_rate << std::setw(12) << v.worst_margin
       << std::setw(11) << v.threshold << "  "
       << (v.passed() ? "pass" : "FAIL") << '\n';
  }
  os << "(probabilistic thresholds are operational; the statements' tail "
        "constants are not pinned by theory)\n";
  return os.str();
}

}  // namespace linforget
