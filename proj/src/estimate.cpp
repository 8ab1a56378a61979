#include "linforget/estimate.hpp"

#include <cmath>
#include <string>

namespace linforget {

namespace {

void require_interpolation(const Matrix& x, const Vector& y,
                           const Vector& beta_hat, const char* label) {
  const double residual = (x * beta_hat - y).norm();
  const double limit = 1e-8 * std::max(1.0, y.norm());
  if (!(residual <= limit))
    throw SingularityError(std::string("fit_sequential: ") + label +
                               " interpolation residual " +
                               std::to_string(residual) + " exceeds " +
                               std::to_string(limit),
                           residual / limit);
}

}  // namespace

EstimatorSet fit_sequential(const TaskPair& tasks) {
  const RowSpaceSolver<double> solver_a(tasks.x_a);
  const RowSpaceSolver<double> solver_b(tasks.x_b);

  EstimatorSet est;
  est.beta_hat_a = solver_a.min_norm(tasks.y);
  est.beta_hat_b = solver_b.min_norm(tasks.y);
  est.beta_hat_ba = solver_b.min_norm(tasks.y, est.beta_hat_a);
  est.beta_true =
      arm_quantities(tasks.w, tasks.config.theta, tasks.config.gamma).beta;

  est.residual_a = (tasks.x_a * est.beta_hat_a - tasks.y).norm();
  est.residual_b = (tasks.x_b * est.beta_hat_b - tasks.y).norm();
  est.residual_ba = (tasks.x_b * est.beta_hat_ba - tasks.y).norm();

  require_interpolation(tasks.x_a, tasks.y, est.beta_hat_a, "task A");
  require_interpolation(tasks.x_b, tasks.y, est.beta_hat_b, "task B");
  require_interpolation(tasks.x_b, tasks.y, est.beta_hat_ba, "task BA");
  return est;
}

EstimatorDecomposition decompose_estimator(const TaskPair& tasks,
                                           const EstimatorSet& est) {
  const double p_gamma =
      static_cast<double>(tasks.config.p) * tasks.config.gamma;

  EstimatorDecomposition dec;
  // ||P_W v|| = ||W^T v|| / sqrt(p*gamma) since W / sqrt(p*gamma) is an
  // orthonormal basis of range(W).
  dec.proj_w_beta_b =
      (tasks.w.transpose() * est.beta_hat_b).norm() / std::sqrt(p_gamma);

  const RowSpaceSolver<double> solver_b(tasks.x_b);
  dec.proj_brow_beta_a =
      std::sqrt(std::max(0.0, solver_b.row_space_squared_norm(est.beta_hat_a)));

  dec.beta_a_norm = est.beta_hat_a.norm();
  dec.beta_b_norm = est.beta_hat_b.norm();

  const RowSpaceSolver<double> solver_a(tasks.x_a);
  Vector eps = tasks.y - tasks.x_a * est.beta_true;
  dec.pinv_noise_norm = solver_a.min_norm(eps).norm();
  return dec;
}

}  // namespace linforget
