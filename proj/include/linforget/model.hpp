#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "linforget/linalg.hpp"

namespace linforget {

/// How task B's features relate to task A's.
enum class TaskRelation { kOrthogonal, kPermutation, kIdentity };

const char* to_string(TaskRelation relation);
TaskRelation task_relation_from_string(const std::string& name);

/// One problem instance: d latent dimensions observed through p noisy
/// channels, n examples per task. Requires 1 <= d <= n < p and gamma > 0.
struct ModelConfig {
  Index d = 0;
  Index n = 0;
  Index p = 0;
  double gamma = 1.0;
  Vector theta;  // latent coefficients, size d
  TaskRelation relation = TaskRelation::kOrthogonal;
  std::uint64_t seed = 0;

  void validate() const;
  double theta_norm2() const { return theta.squaredNorm(); }
};

/// The task-B feature transform, kept in whatever factored form is cheap to
/// apply: reflector chain for a Haar rotation, an index table for a
/// permutation, nothing for the identity. dense() materializes it for tests
/// and moderate p.
class TaskTransform {
 public:
  static TaskTransform make_identity(Index p);
  static TaskTransform make_permutation(std::vector<Index> image);
  static TaskTransform make_orthogonal(HaarRotation<double> rotation);
  static TaskTransform sample(TaskRelation relation, Index p, SeededRng rng);

  TaskRelation kind() const { return kind_; }
  Index size() const { return p_; }

  Vector apply(const Vector& v) const;            // T v
  Vector apply_transpose(const Vector& v) const;  // T^T v
  Matrix right_transpose_product(const Matrix& x) const;  // X T^T
  Matrix dense() const;

 private:
  TaskTransform(TaskRelation kind, Index p) : kind_(kind), p_(p) {}

  TaskRelation kind_;
  Index p_;
  std::vector<Index> image_;                          // permutation only
  std::shared_ptr<const HaarRotation<double>> rotation_;  // orthogonal only
};

/// Realized data for one two-task instance.
struct TaskPair {
  ModelConfig config;
  Matrix w;    // p x d feature map, W^T W = p*gamma*I
  Matrix x_a;  // n x p task-A features
  Vector y;    // shared responses
  TaskTransform t;
  Matrix x_b;  // n x p, equals x_a * T^T
  Matrix z;    // n x d latent draws
  Matrix u;    // n x p feature-noise draws
};

/// The equivalent anisotropic-regression quantities. Sigma = W W^T + I is
/// kept factored through W: v^T Sigma v = ||v||^2 + ||W^T v||^2 exactly, so
/// no p x p matrix is ever formed.
struct ArmQuantities {
  Matrix w;        // p x d
  double p_gamma;  // the common squared singular value of W
  Vector beta;     // W (W^T W + I)^{-1} theta
  double sigma2;   // theta^T (W^T W + I)^{-1} theta

  Matrix dense_sigma() const;  // I + W W^T, for small p
};

/// Feature map with equal singular values: sqrt(p*gamma) times an
/// orthonormal basis of a Haar-random d-dimensional subspace of R^p.
Matrix make_w(Index d, Index p, double gamma, SeededRng& rng);

/// theta ~ N(0, I_d).
Vector sample_theta(Index d, SeededRng& rng);

/// Draws W, latent rows Z, noise U, responses y = Z theta, task-A features
/// X_A = Z W^T + U, the task transform T, and X_B = X_A T^T. All randomness
/// comes from fixed substreams of SeededRng(config.seed), so a TaskPair is a
/// pure function of its config.
TaskPair generate_task_pair(const ModelConfig& config);

/// Computes Sigma/beta/sigma^2 from the general formulas (not the
/// equal-singular-value shortcuts); rejects W whose structure deviates from
/// W^T W = p*gamma*I by more than 1e-6 relative.
ArmQuantities arm_quantities(const Matrix& w, const Vector& theta,
                             double gamma);

/// Max-entry residual of (I + W W^T)^{-1} W - W (W^T W + I)^{-1}, via dense
/// inverses; intended for moderate p.
double push_through_residual(const Matrix& w);

/// Streams `count` i.i.d. latent-model examples (x = W z + u, y = z^T theta)
/// to `sink` in batches of at most `batch` rows.
void stream_lsm_rows(
    const Matrix& w, const Vector& theta, Index count, Index batch,
    SeededRng& rng,
    const std::function<void(const Matrix& x, const Vector& y)>& sink);

/// Relative Frobenius mismatch, per block, between the empirical covariance
/// of (y, x) under the latent model and the analytic blocks
/// [[||theta||^2, (W theta)^T], [W theta, I + W W^T]]. Blocks whose analytic
/// norm is zero report absolute error instead.
struct CovarianceCheck {
  double err_yy;
  double err_xy;
  double err_xx;
  double max_err() const;
};

CovarianceCheck lsm_arm_covariance_check(const ModelConfig& config,
                                         Index sample_count);

}  // namespace linforget
