#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>

#include "linforget/estimate.hpp"
#include "linforget/parallel.hpp"

using namespace linforget;

namespace {

ModelConfig make_config(Index d, Index n, Index p, double gamma,
                        TaskRelation relation, std::uint64_t seed) {
  ModelConfig cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.p = p;
  cfg.gamma = gamma;
  cfg.relation = relation;
  cfg.seed = seed;
  SeededRng rng(seed, 999);
  cfg.theta = sample_theta(d, rng);
  return cfg;
}

// Projector-identity reconstruction through the SVD pseudoinverse,
// independent of the Cholesky production path.
Vector closed_form_ba(const TaskPair& tasks) {
  const Matrix pinv_a = pinv_svd(tasks.x_a);
  const Matrix pinv_b = pinv_svd(tasks.x_b);
  const Vector beta_a = pinv_a * tasks.y;
  const Vector beta_b = pinv_b * tasks.y;
  return beta_a + beta_b - pinv_b * (tasks.x_b * beta_a);
}

}  // namespace

TEST_CASE("identity relation keeps the first fit") {
  const TaskPair tasks = generate_task_pair(
      make_config(3, 8, 20, 1.0, TaskRelation::kIdentity, 5));
  const EstimatorSet est = fit_sequential(tasks);
  CHECK((est.beta_hat_ba - est.beta_hat_a).norm() <=
        1e-9 * est.beta_hat_a.norm());
}

TEST_CASE("all three estimators interpolate") {
  for (auto relation : {TaskRelation::kOrthogonal, TaskRelation::kPermutation,
                        TaskRelation::kIdentity}) {
    const TaskPair tasks =
        generate_task_pair(make_config(4, 10, 30, 0.5, relation, 6));
    const EstimatorSet est = fit_sequential(tasks);
    const double limit = 1e-8 * std::max(1.0, tasks.y.norm());
    CHECK(est.residual_a <= limit);
    CHECK(est.residual_b <= limit);
    CHECK(est.residual_ba <= limit);
    CHECK((tasks.x_b * est.beta_hat_ba - tasks.y).norm() <= limit);
  }
}

TEST_CASE("projector closed form at n=5, p=12, d=2") {
  const TaskPair tasks = generate_task_pair(
      make_config(2, 5, 12, 1.0, TaskRelation::kOrthogonal, 7));
  const EstimatorSet est = fit_sequential(tasks);
  const Vector oracle = closed_form_ba(tasks);
  CHECK((est.beta_hat_ba - oracle).norm() <=
        1e-8 * std::max(1.0, oracle.norm()));
}

TEST_CASE("closed-form consistency over random small instances") {
  SeededRng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(trial));
    const Index d = 1 + static_cast<Index>(trng.next_below(5));
    const Index n = d + static_cast<Index>(trng.next_below(
                            static_cast<std::uint64_t>(21 - d)));
    const Index p = n + 1 + static_cast<Index>(trng.next_below(
                                static_cast<std::uint64_t>(60 - n)));
    const auto relation = trial % 3 == 0 ? TaskRelation::kPermutation
                                         : TaskRelation::kOrthogonal;
    const TaskPair tasks = generate_task_pair(
        make_config(d, n, p, 0.2 + trng.next_uniform() * 2.0, relation,
                    trng.next_u64()));
    const EstimatorSet est = fit_sequential(tasks);
    const Vector oracle = closed_form_ba(tasks);
    CHECK((est.beta_hat_ba - oracle).norm() <=
          1e-8 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("minimum-norm orthogonality of the updates") {
  const TaskPair tasks = generate_task_pair(
      make_config(3, 12, 40, 1.0, TaskRelation::kOrthogonal, 13));
  const EstimatorSet est = fit_sequential(tasks);

  // beta_hat_a has no component off the row space of X_A.
  const RowSpaceSolver<double> solver_a(tasks.x_a);
  CHECK((est.beta_hat_a - solver_a.project_row_space(est.beta_hat_a)).norm() <=
        1e-8 * est.beta_hat_a.norm());

  // The sequential update moves only along the row space of X_B.
  const RowSpaceSolver<double> solver_b(tasks.x_b);
  const Vector step = est.beta_hat_ba - est.beta_hat_a;
  CHECK((step - solver_b.project_row_space(step)).norm() <=
        1e-8 * std::max(1e-12, step.norm()));
}

TEST_CASE("task-B fit is the rotated task-A fit") {
  const TaskPair tasks = generate_task_pair(
      make_config(4, 9, 60, 1.0, TaskRelation::kOrthogonal, 21));
  const EstimatorSet est = fit_sequential(tasks);
  // X_B = X_A T^T makes the two min-norm problems congruent under T.
  CHECK((est.beta_hat_b - tasks.t.apply(est.beta_hat_a)).norm() <=
        1e-8 * est.beta_hat_a.norm());
}

TEST_CASE("decomposition quantities") {
  const TaskPair tasks = generate_task_pair(
      make_config(4, 15, 80, 1.0, TaskRelation::kOrthogonal, 31));
  const EstimatorSet est = fit_sequential(tasks);
  const EstimatorDecomposition dec = decompose_estimator(tasks, est);

  CHECK(dec.beta_a_norm == doctest::Approx(est.beta_hat_a.norm()));
  CHECK(dec.beta_b_norm == doctest::Approx(est.beta_hat_b.norm()));

  // Projections contract.
  CHECK(dec.proj_brow_beta_a <= dec.beta_a_norm * (1.0 + 1e-10));
  CHECK(dec.proj_w_beta_b <= dec.beta_b_norm * (1.0 + 1e-10));

  // Cross-check against dense projectors.
  const Matrix proj_w = projector_onto_columns(tasks.w);
  CHECK(std::abs((proj_w * est.beta_hat_b).norm() - dec.proj_w_beta_b) <=
        1e-8 * std::max(1.0, dec.proj_w_beta_b));
  const Matrix xbt = tasks.x_b.transpose();
  const Matrix proj_b = projector_onto_columns(xbt);
  CHECK(std::abs((proj_b * est.beta_hat_a).norm() - dec.proj_brow_beta_a) <=
        1e-8 * std::max(1.0, dec.proj_brow_beta_a));

  // Effective-noise split: beta_hat_a = P_{A^T} beta + A^+ (y - X_A beta).
  const Matrix pinv_a = pinv_svd(tasks.x_a);
  const Vector eps = tasks.y - tasks.x_a * est.beta_true;
  const Vector reconstructed =
      pinv_a * (tasks.x_a * est.beta_true) + pinv_a * eps;
  CHECK((reconstructed - est.beta_hat_a).norm() <=
        1e-8 * std::max(1.0, est.beta_hat_a.norm()));
  CHECK(std::abs((pinv_a * eps).norm() - dec.pinv_noise_norm) <=
        1e-8 * std::max(1.0, dec.pinv_noise_norm));
}

TEST_CASE("projection bounds hold in nearly all trials at d=20 n=100 p=2000") {
  const int trials = 100;
  std::atomic<int> pass_w{0}, pass_b{0};
  parallel_for(trials, 0, [&](std::size_t i) {
    const TaskPair tasks = generate_task_pair(make_config(
        20, 100, 2000, 1.0, TaskRelation::kOrthogonal,
        SeededRng::mix(505, i)));
    const EstimatorSet est = fit_sequential(tasks);
    const EstimatorDecomposition dec = decompose_estimator(tasks, est);
    const double dp = 2.0 * 20.0 / 2000.0;
    const double np = 2.0 * 100.0 / 2000.0;
    if (dec.proj_w_beta_b * dec.proj_w_beta_b <=
        dp * dec.beta_b_norm * dec.beta_b_norm)
      ++pass_w;
    if (dec.proj_brow_beta_a * dec.proj_brow_beta_a <=
        np * dec.beta_a_norm * dec.beta_a_norm)
      ++pass_b;
  });
  CHECK(pass_w.load() >= 99);
  CHECK(pass_b.load() >= 99);
}

TEST_CASE("fitted norms stay within twice the true norm when p >= 17n") {
  const int trials = 1000;
  std::atomic<int> event{0};
  parallel_for(trials, 0, [&](std::size_t i) {
    const TaskPair tasks = generate_task_pair(make_config(
        20, 100, 1700, 1.0, TaskRelation::kOrthogonal,
        SeededRng::mix(606, i)));
    const EstimatorSet est = fit_sequential(tasks);
    const double limit = 2.0 * est.beta_true.norm();
    if (est.beta_hat_a.norm() <= limit && est.beta_hat_b.norm() <= limit)
      ++event;
  });
  CHECK(event.load() >= 990);
}
