#pragma once

#include "linforget/model.hpp"

namespace linforget {

/// The three interpolators of one two-task instance plus the true ARM
/// coefficient; residuals are ||X beta_hat - y|| against each task's data.
struct EstimatorSet {
  Vector beta_hat_a;   // min-norm fit of task A from zero
  Vector beta_hat_b;   // min-norm fit of task B from zero
  Vector beta_hat_ba;  // fit of task B initialized at beta_hat_a
  Vector beta_true;    // W (W^T W + I)^{-1} theta
  double residual_a;
  double residual_b;
  double residual_ba;
};

/// Solves the three constrained problems in closed form, sharing one
/// Cholesky factor per data matrix. Throws SingularityError if either Gram
/// matrix fails to factor or an interpolation residual exceeds
/// 1e-8 * max(1, ||y||).
EstimatorSet fit_sequential(const TaskPair& tasks);

/// Norms feeding the projection-bound oracles and the effective-noise
/// split beta_hat_a = P_{A^T} beta + A^+ eps with eps = y - X_A beta.
struct EstimatorDecomposition {
  double proj_w_beta_b;     // ||P_W beta_hat_b||
  double proj_brow_beta_a;  // ||P_{X_B^T} beta_hat_a||
  double beta_a_norm;
  double beta_b_norm;
  double pinv_noise_norm;   // ||X_A^+ (y - X_A beta_true)||
};

EstimatorDecomposition decompose_estimator(const TaskPair& tasks,
                                           const EstimatorSet& est);

}  // namespace linforget
