#pragma once

#include <string>
#include <vector>

#include "linforget/estimate.hpp"
#include "linforget/model.hpp"

namespace linforget {

/// Closed-form task-A risks of one fitted instance, the forgetting bound,
/// and the three upper-bound terms from the drop decomposition.
struct RiskReport {
  double risk_null;        // risk of the zero estimator
  double risk_a;           // risk of beta_hat_a
  double risk_ba;          // risk of beta_hat_ba
  double drop;             // risk_ba - risk_a
  double bound;            // (66 sqrt(n/p) + 12/(p*gamma)) ||theta||^2
  bool bound_applicable;   // n >= d and p >= max(17n, 1/gamma)
  double term_i;
  double term_ii;
  double term_iii;
};

/// Exact task-A risk: sigma^2 + (b - beta)^T Sigma (b - beta), evaluated
/// through the factored Sigma as sigma^2 + ||b - beta||^2 + ||W^T(b - beta)||^2.
double risk(const Vector& beta_hat, const ArmQuantities& arm);

struct BoundResult {
  double bound;
  bool applicable;
  std::vector<std::string> reasons;  // violated preconditions, if any
};

BoundResult theorem_bound(Index d, Index n, Index p, double gamma,
                          double theta_norm2);
BoundResult theorem_bound(const ModelConfig& config);

/// Fills a RiskReport for a fitted instance. The drop sign convention is
/// risk(beta_hat_ba) - risk(beta_hat_a): the increase on task A caused by
/// training on task B.
RiskReport performance_drop(const TaskPair& tasks, const EstimatorSet& est,
                            const ArmQuantities& arm);

}  // namespace linforget
