#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linforget/linalg.hpp"

using namespace linforget;

namespace {

double orthogonality_error(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("haar p=1 hits both signs evenly") {
  int plus = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    SeededRng rng(s, 11);
    const Matrix q = haar_orthogonal(1, rng);
    const double v = q(0, 0);
    REQUIRE((v == 1.0 || v == -1.0));
    if (v == 1.0) ++plus;
  }
  CHECK(std::abs(plus / 1000.0 - 0.5) <= 0.05);
}

TEST_CASE("haar p=50 orthogonality") {
  SeededRng rng(3);
  const Matrix q = haar_orthogonal(50, rng);
  CHECK(orthogonality_error(q) <= 1e-10);
}

TEST_CASE("haar p=200 sphere marginals of the first column") {
  const Index p = 200;
  const int draws = 2000;
  SeededRng rng(17);
  Vector e1 = Vector::Zero(p);
  e1(0) = 1.0;
  Vector mean = Vector::Zero(p);
  double coord_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    SeededRng draw_rng = rng.substream(static_cast<std::uint64_t>(i));
    const HaarRotation<double> q(p, draw_rng);
    const Vector col = q.apply(e1);
    mean += col;
    coord_sq += col(0) * col(0);
  }
  mean /= draws;
  coord_sq /= draws;
  CHECK(mean.cwiseAbs().maxCoeff() <= 0.07);
  CHECK(coord_sq >= 0.8 / static_cast<double>(p));
  CHECK(coord_sq <= 1.2 / static_cast<double>(p));
}

TEST_CASE("haar invariants across sizes") {
  SeededRng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(trial));
    const Index p = 1 + static_cast<Index>(trng.next_below(60));
    const HaarRotation<double> rot(p, trng);
    const Matrix q = rot.dense();
    CHECK(orthogonality_error(q) <= 1e-10);
    CHECK(std::abs(std::abs(q.determinant()) - 1.0) <= 1e-8);

    const Vector v = gaussian_vector(p, trng);
    CHECK((q * v - rot.apply(v)).norm() <= 1e-12 * v.norm());
    CHECK((q.transpose() * v - rot.apply_transpose(v)).norm() <=
          1e-12 * v.norm());
  }
}

TEST_CASE("haar rejects p=0") {
  SeededRng rng(1);
  CHECK_THROWS_AS(haar_orthogonal(0, rng), InvalidDimensionError);
}

TEST_CASE("permutation p=1 is the identity") {
  SeededRng rng(1);
  const Matrix p = random_permutation(1, rng);
  CHECK(p(0, 0) == 1.0);
}

TEST_CASE("permutation p=3 is uniform over S3") {
  int counts[6] = {0, 0, 0, 0, 0, 0};
  SeededRng rng(123);
  const int draws = 6000;
  for (int i = 0; i < draws; ++i) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(i));
    const auto image = random_permutation_indices(3, trng);
    // Lehmer-style code: 2*image[0] + (image[1] > image[2] ? 1 : 0).
    const int code = static_cast<int>(image[0]) * 2 +
                     (image[1] > image[2] ? 1 : 0);
    ++counts[code];
  }
  for (int c : counts)
    CHECK(std::abs(c / static_cast<double>(draws) - 1.0 / 6.0) <= 0.02);
}

TEST_CASE("permutation matrices are exactly orthogonal") {
  SeededRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(trial));
    const Index p = 1 + static_cast<Index>(trng.next_below(40));
    const Matrix perm = random_permutation(p, trng);
    CHECK((perm.transpose() * perm - Matrix::Identity(p, p))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    for (Index i = 0; i < p; ++i)
      for (Index j = 0; j < p; ++j)
        REQUIRE((perm(i, j) == 0.0 || perm(i, j) == 1.0));
  }
}

TEST_CASE("permutation rejects p=0") {
  SeededRng rng(1);
  CHECK_THROWS_AS(random_permutation(0, rng), InvalidDimensionError);
}

TEST_CASE("projector onto the first coordinate axis") {
  Matrix m(3, 1);
  m << 1.0, 0.0, 0.0;
  const Matrix p = projector_onto_columns(m);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  CHECK((p - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("projector of a full orthogonal matrix is the identity") {
  SeededRng rng(21);
  const Matrix q = haar_orthogonal(8, rng);
  const Matrix p = projector_onto_columns(q);
  CHECK((p - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("projector contraction, idempotence, symmetry") {
  SeededRng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(trial));
    const Matrix m = gaussian_matrix(10, 3, trng);
    const Matrix p = projector_onto_columns(m);
    const Vector v = gaussian_vector(10, trng);
    const Vector pv = p * v;
    CHECK(pv.norm() <= v.norm() * (1.0 + 1e-12));
    CHECK((p * pv - pv).norm() <= 1e-9 * v.norm());
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((p * m - m).norm() <= 1e-9 * m.norm());
  }
}

TEST_CASE("projector rejects rank-deficient input with a condition estimate") {
  SeededRng rng(4);
  Matrix m = gaussian_matrix(10, 3, rng);
  m.col(2) = m.col(0) + m.col(1);
  try {
    projector_onto_columns(m);
    FAIL("expected SingularityError");
  } catch (const SingularityError& e) {
    CHECK(e.condition_estimate() > 1e9);
  }
}

TEST_CASE("min-norm solve with X = I returns y") {
  SeededRng rng(8);
  const Matrix x = Matrix::Identity(5, 5);
  const Vector y = gaussian_vector(5, rng);
  const Vector beta = min_norm_solve(x, y, Vector::Zero(5));
  CHECK((beta - y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feasible initialization is a fixed point") {
  SeededRng rng(13);
  const Matrix x = gaussian_matrix(6, 15, rng);
  const Vector beta0 = gaussian_vector(15, rng);
  const Vector y = x * beta0;
  const Vector beta = min_norm_solve(x, y, beta0);
  CHECK((beta - beta0).norm() <= 1e-9 * beta0.norm());
}

TEST_CASE("min-norm solve agrees with the SVD pseudoinverse") {
  SeededRng rng(55);
  const Matrix x = gaussian_matrix(5, 12, rng);
  const Vector y = gaussian_vector(5, rng);
  const Vector beta = min_norm_solve(x, y, Vector::Zero(12));
  const Vector oracle = pinv_svd(x) * y;
  CHECK((beta - oracle).norm() <= 1e-8 * oracle.norm());
}

TEST_CASE("min-norm properties over random regimes") {
  SeededRng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(trial));
    const Index n = 1 + static_cast<Index>(trng.next_below(20));
    const Index p =
        n + static_cast<Index>(trng.next_below(
                static_cast<std::uint64_t>(41 - n)));
    const Matrix x = gaussian_matrix(n, p, trng);
    const Vector y = gaussian_vector(n, trng);
    const Vector beta0 = gaussian_vector(p, trng);
    const Vector beta = min_norm_solve(x, y, beta0);

    // Interpolation.
    CHECK((x * beta - y).norm() <= 1e-8 * std::max(1.0, y.norm()));

    // Zero-initialized solution matches the pseudoinverse oracle.
    const Vector from_zero = min_norm_solve(x, y, Vector::Zero(p));
    const Vector oracle = pinv_svd(x) * y;
    CHECK((from_zero - oracle).norm() <=
          1e-8 * std::max(1.0, oracle.norm()));

    // The update leaves beta0 only along the row space.
    const Matrix pinv = pinv_svd(x);
    const Vector step = beta - beta0;
    const Vector off_row = step - pinv * (x * step);
    CHECK(off_row.norm() <= 1e-8 * std::max(1.0, step.norm()));
  }
}

TEST_CASE("min-norm solve rejects n > p") {
  SeededRng rng(2);
  const Matrix x = gaussian_matrix(7, 4, rng);
  const Vector y = gaussian_vector(7, rng);
  CHECK_THROWS_AS(min_norm_solve(x, y, Vector::Zero(4)),
                  UnsupportedRegimeError);
}

TEST_CASE("pinv of a diagonal matrix") {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 2.0;
  const Matrix pinv = pinv_svd(x);
  CHECK(pinv(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pinv(0, 1) == 0.0);
  CHECK(pinv(1, 0) == 0.0);
  CHECK(pinv(1, 1) == 0.0);
}

TEST_CASE("pinv of an orthogonal matrix is its transpose") {
  SeededRng rng(31);
  const Matrix q = haar_orthogonal(9, rng);
  CHECK((pinv_svd(q) - q.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pinv satisfies the Penrose identities") {
  SeededRng rng(44);
  for (int trial = 0; trial < 25; ++trial) {
    SeededRng trng = rng.substream(static_cast<std::uint64_t>(trial));
    const Matrix x = gaussian_matrix(4, 9, trng);
    const Matrix pinv = pinv_svd(x);
    const double scale = std::max(1.0, x.norm());
    CHECK((x * pinv * x - x).norm() <= 1e-8 * scale);
    CHECK((pinv * x * pinv - pinv).norm() <= 1e-8 * scale);
    CHECK(((x * pinv) - (x * pinv).transpose()).norm() <= 1e-8);
    CHECK(((pinv * x) - (pinv * x).transpose()).norm() <= 1e-8);
  }
}
