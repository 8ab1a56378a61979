#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linforget/model.hpp"

namespace linforget {

/// Identifier of one verified statement.
enum class LemmaId {
  kRowNormMoment,   // E||row||^2 = d*p*gamma + p
  kGaussNormConc,   // ||N(0,I_dim)||^2 within dim*(1 +- eps)
  kProjWHaar,       // ||P_W O v||^2 <= (2d/p) ||v||^2
  kProjBHaar,       // ||P_{B^T} v||^2 <= (2n/p) ||v||^2, v in range(A^T)
  kSigmaMin,        // sigma_min(A)^2 >= (sqrt(p-d) - 2 sqrt(n))^2
  kPinvNoise,       // ||A^+ eps||^2 <= n ||theta||^2 / (p g (sqrt(p-d)-2 sqrt n)^2)
  kBetaLower,       // sqrt(n)||theta|| / (sqrt(pg)(sqrt(p-d)-2 sqrt n)) <= ||beta||
  kPushThrough,     // (I + W W^T)^{-1} W = W (W^T W + I)^{-1}
  kNullRisk,        // risk(0) = ||theta||^2
  kCovEquiv,        // latent-model covariance matches the ARM blocks
};

const char* to_string(LemmaId id);

/// Outcome of one Monte Carlo verification. Every trial reduces to a
/// violation ratio (pass iff ratio <= 1); worst_margin is the largest ratio
/// seen, so a failing verdict shows how far it missed.
struct LemmaVerdict {
  LemmaId lemma;
  std::int64_t trials;
  std::int64_t passes;
  double pass_rate;
  double worst_margin;
  double threshold;  // required pass_rate

  bool passed() const { return pass_rate >= threshold; }
};

/// Which vector the projection checks probe: a fixed random unit vector or
/// the first basis vector. Haar invariance makes the two distributions
/// identical; both are exposed for cross-checking.
enum class ProbeVector { kRandom, kFirstBasis };

LemmaVerdict check_gauss_norm_concentration(Index dim, double eps,
                                            std::int64_t trials,
                                            SeededRng rng,
                                            unsigned workers = 0);

LemmaVerdict check_proj_w_haar(Index d, Index p, std::int64_t trials,
                               SeededRng rng,
                               ProbeVector probe = ProbeVector::kRandom,
                               unsigned workers = 0);

LemmaVerdict check_proj_b_haar(const ModelConfig& config, std::int64_t trials,
                               unsigned workers = 0);

LemmaVerdict check_sigma_min(const ModelConfig& config, std::int64_t trials,
                             unsigned workers = 0);

LemmaVerdict check_pinv_noise(const ModelConfig& config, std::int64_t trials,
                              unsigned workers = 0);

/// Deterministic arithmetic inequality over random (d, n, p, gamma)
/// satisfying p >= max(16n + d, 1/gamma); must always pass.
LemmaVerdict check_beta_lower(std::int64_t trials, SeededRng rng,
                              unsigned workers = 0);

/// Exact identity on general Gaussian W (entries N(0, 1/p)); p capped at 500
/// because it takes a dense p x p inverse.
LemmaVerdict check_push_through(Index d, Index p, std::int64_t trials,
                                SeededRng rng, unsigned workers = 0);

/// risk(0) = ||theta||^2 to 1e-9 relative on random instances.
LemmaVerdict check_null_risk(std::int64_t trials, SeededRng rng,
                             unsigned workers = 0);

/// Aggregate moment check: empirical mean of ||row||^2 over `samples` rows
/// against d*p*gamma + p at 2% relative; pass_rate is 1 or 0.
LemmaVerdict check_row_norm_moment(Index d, Index p, double gamma,
                                   std::int64_t samples, SeededRng rng);

/// Covariance-block agreement at 5% relative; trials = 3 blocks.
LemmaVerdict check_cov_equivalence(const ModelConfig& config, Index samples);

enum class OracleProfile { kQuick, kFull };

/// Runs the whole battery at the default configurations. The probabilistic
/// thresholds are operational choices, not guarantees carried by the
/// statements themselves (their constants are unspecified).
std::vector<LemmaVerdict> run_all_oracles(OracleProfile profile,
                                          std::uint64_t master_seed,
                                          unsigned workers = 0);

bool all_passed(const std::vector<LemmaVerdict>& verdicts);

/// CSV with header lemma_id,trials,passes,pass_rate,worst_margin,threshold,status.
void write_verdicts_csv(const std::vector<LemmaVerdict>& verdicts,
                        const std::string& path);

std::string format_verdict_table(const std::vector<LemmaVerdict>& verdicts);

}  // namespace linforget
