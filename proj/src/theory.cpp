#include "linforget/theory.hpp"

#include <cmath>

namespace linforget {

double risk(const Vector& beta_hat, const ArmQuantities& arm) {
  if (beta_hat.size() != arm.w.rows())
    throw InvalidDimensionError("risk: estimator size " +
                                std::to_string(beta_hat.size()) +
                                " != p = " + std::to_string(arm.w.rows()));
  Vector diff = beta_hat - arm.beta;
  return arm.sigma2 + diff.squaredNorm() +
         (arm.w.transpose() * diff).squaredNorm();
}

BoundResult theorem_bound(Index d, Index n, Index p, double gamma,
                          double theta_norm2) {
  BoundResult result;
  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  result.bound =
      (66.0 * std::sqrt(nd / pd) + 12.0 / (pd * gamma)) * theta_norm2;
  if (n < d) result.reasons.push_back("n < d");
  if (pd < 17.0 * nd) result.reasons.push_back("p < 17n");
  if (pd < 1.0 / gamma) result.reasons.push_back("p < 1/gamma");
  result.applicable = result.reasons.empty();
  return result;
}

BoundResult theorem_bound(const ModelConfig& config) {
  return theorem_bound(config.d, config.n, config.p, config.gamma,
                       config.theta_norm2());
}

RiskReport performance_drop(const TaskPair& tasks, const EstimatorSet& est,
                            const ArmQuantities& arm) {
  const Index p = tasks.config.p;
  const double p_gamma = arm.p_gamma;
  const double theta_norm = tasks.config.theta.norm();

  RiskReport report;
  report.risk_null = risk(Vector::Zero(p), arm);
  report.risk_a = risk(est.beta_hat_a, arm);
  report.risk_ba = risk(est.beta_hat_ba, arm);
  report.drop = report.risk_ba - report.risk_a;

  const BoundResult bound = theorem_bound(tasks.config);
  report.bound = bound.bound;
  report.bound_applicable = bound.applicable;

  const EstimatorDecomposition dec = decompose_estimator(tasks, est);
  report.term_i = 8.0 * p_gamma * std::sqrt(p_gamma) / (p_gamma + 1.0) *
                  theta_norm * dec.proj_w_beta_b;
  report.term_ii =
      14.0 * std::sqrt(p_gamma) * theta_norm * dec.proj_brow_beta_a;
  report.term_iii = 12.0 * p_gamma / ((p_gamma + 1.0) * (p_gamma + 1.0)) *
                    theta_norm * theta_norm;
  return report;
}

}  // namespace linforget
