#include "linforget/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace linforget {

namespace {

// Substream ids inside a task pair's seed; fixed so draws are stable.
constexpr std::uint64_t kStreamW = 1;
constexpr std::uint64_t kStreamZ = 2;
constexpr std::uint64_t kStreamU = 3;
constexpr std::uint64_t kStreamT = 4;

}  // namespace

const char* to_string(TaskRelation relation) {
  switch (relation) {
    case TaskRelation::kOrthogonal: return "orthogonal";
    case TaskRelation::kPermutation: return "permutation";
    case TaskRelation::kIdentity: return "identity";
  }
  return "?";
}

TaskRelation task_relation_from_string(const std::string& name) {
  if (name == "orthogonal") return TaskRelation::kOrthogonal;
  if (name == "permutation") return TaskRelation::kPermutation;
  if (name == "identity") return TaskRelation::kIdentity;
  throw Error("unknown task relation: " + name);
}

void ModelConfig::validate() const {
  if (d < 1)
    throw InvalidDimensionError("ModelConfig: d must be >= 1, got " +
                                std::to_string(d));
  if (d > n)
    throw InvalidDimensionError("ModelConfig: need d <= n, got d=" +
                                std::to_string(d) + ", n=" +
                                std::to_string(n));
  if (n >= p)
    throw InvalidDimensionError("ModelConfig: need n < p, got n=" +
                                std::to_string(n) + ", p=" +
                                std::to_string(p));
  if (!(gamma > 0.0))
    throw Error("ModelConfig: gamma must be > 0, got " +
                std::to_string(gamma));
  if (theta.size() != d)
    throw InvalidDimensionError(
        "ModelConfig: theta has size " + std::to_string(theta.size()) +
        ", expected d=" + std::to_string(d));
}

TaskTransform TaskTransform::make_identity(Index p) {
  return TaskTransform(TaskRelation::kIdentity, p);
}

TaskTransform TaskTransform::make_permutation(std::vector<Index> image) {
  TaskTransform t(TaskRelation::kPermutation,
                  static_cast<Index>(image.size()));
  t.image_ = std::move(image);
  return t;
}

TaskTransform TaskTransform::make_orthogonal(HaarRotation<double> rotation) {
  TaskTransform t(TaskRelation::kOrthogonal, rotation.size());
  t.rotation_ =
      std::make_shared<const HaarRotation<double>>(std::move(rotation));
  return t;
}

TaskTransform TaskTransform::sample(TaskRelation relation, Index p,
                                    SeededRng rng) {
  switch (relation) {
    case TaskRelation::kIdentity:
      return make_identity(p);
    case TaskRelation::kPermutation:
      return make_permutation(random_permutation_indices(p, rng));
    case TaskRelation::kOrthogonal:
      return make_orthogonal(HaarRotation<double>(p, rng));
  }
  throw Error("TaskTransform: bad relation");
}

Vector TaskTransform::apply(const Vector& v) const {
  switch (kind_) {
    case TaskRelation::kIdentity:
      return v;
    case TaskRelation::kPermutation: {
      Vector out(p_);
      for (Index k = 0; k < p_; ++k)
        out(image_[static_cast<std::size_t>(k)]) = v(k);
      return out;
    }
    case TaskRelation::kOrthogonal:
      return rotation_->apply(v);
  }
  throw Error("TaskTransform: bad relation");
}

Vector TaskTransform::apply_transpose(const Vector& v) const {
  switch (kind_) {
    case TaskRelation::kIdentity:
      return v;
    case TaskRelation::kPermutation: {
      Vector out(p_);
      for (Index k = 0; k < p_; ++k)
        out(k) = v(image_[static_cast<std::size_t>(k)]);
      return out;
    }
    case TaskRelation::kOrthogonal:
      return rotation_->apply_transpose(v);
  }
  throw Error("TaskTransform: bad relation");
}

Matrix TaskTransform::right_transpose_product(const Matrix& x) const {
  switch (kind_) {
    case TaskRelation::kIdentity:
      return x;
    case TaskRelation::kPermutation: {
      // Row i of X T^T is T applied to row i: column k lands on sigma(k).
      Matrix out(x.rows(), p_);
      for (Index k = 0; k < p_; ++k)
        out.col(image_[static_cast<std::size_t>(k)]) = x.col(k);
      return out;
    }
    case TaskRelation::kOrthogonal:
      return rotation_->right_transpose_product(x);
  }
  throw Error("TaskTransform: bad relation");
}

Matrix TaskTransform::dense() const {
  switch (kind_) {
    case TaskRelation::kIdentity:
      return Matrix::Identity(p_, p_);
    case TaskRelation::kPermutation:
      return permutation_matrix<double>(image_);
    case TaskRelation::kOrthogonal:
      return rotation_->dense();
  }
  throw Error("TaskTransform: bad relation");
}

Matrix make_w(Index d, Index p, double gamma, SeededRng& rng) {
  if (d < 1 || d > p)
    throw InvalidDimensionError("make_w: need 1 <= d <= p, got d=" +
                                std::to_string(d) + ", p=" +
                                std::to_string(p));
  if (!(gamma > 0.0))
    throw Error("make_w: gamma must be > 0");
  // Thin QR of a p x d Gaussian block; the sign fix makes the factor the
  // leading d columns of a Haar-distributed p x p orthogonal matrix.
  Matrix g = gaussian_matrix(p, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(p, d);
  for (Index j = 0; j < d; ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  return std::sqrt(static_cast<double>(p) * gamma) * q;
}

Vector sample_theta(Index d, SeededRng& rng) {
  return gaussian_vector(d, rng);
}

TaskPair generate_task_pair(const ModelConfig& config) {
  config.validate();
  const SeededRng root(config.seed);

  SeededRng rng_w = root.substream(kStreamW);
  SeededRng rng_z = root.substream(kStreamZ);
  SeededRng rng_u = root.substream(kStreamU);

  Matrix w = make_w(config.d, config.p, config.gamma, rng_w);
  Matrix z = gaussian_matrix(config.n, config.d, rng_z);
  Matrix u = gaussian_matrix(config.n, config.p, rng_u);

  Vector y = z * config.theta;
  Matrix x_a = u;
  x_a.noalias() += z * w.transpose();

  TaskTransform t = TaskTransform::sample(config.relation, config.p,
                                          root.substream(kStreamT));
  Matrix x_b = t.right_transpose_product(x_a);

  return TaskPair{config,       std::move(w), std::move(x_a), std::move(y),
                  std::move(t), std::move(x_b), std::move(z), std::move(u)};
}

ArmQuantities arm_quantities(const Matrix& w, const Vector& theta,
                             double gamma) {
  const Index p = w.rows();
  const Index d = w.cols();
  if (theta.size() != d)
    throw InvalidDimensionError("arm_quantities: theta size " +
                                std::to_string(theta.size()) +
                                " != d = " + std::to_string(d));
  const double p_gamma = static_cast<double>(p) * gamma;

  Matrix gram = w.transpose() * w;
  const double residual =
      (gram - p_gamma * Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual > 1e-6 * p_gamma)
    throw ModelAssumptionError(
        "arm_quantities: W^T W deviates from p*gamma*I by " +
        std::to_string(residual / p_gamma) + " relative (limit 1e-6)");

  gram.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(gram);
  Vector solved = llt.solve(theta);

  ArmQuantities arm;
  arm.w = w;
  arm.p_gamma = p_gamma;
  arm.beta = w * solved;
  arm.sigma2 = theta.dot(solved);
  return arm;
}

Matrix ArmQuantities::dense_sigma() const {
  const Index p = w.rows();
  Matrix sigma = Matrix::Identity(p, p);
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(w);
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
  return sigma;
}

double push_through_residual(const Matrix& w) {
  const Index p = w.rows();
  const Index d = w.cols();
  Matrix left = (Matrix::Identity(p, p) + w * w.transpose()).inverse() * w;
  Matrix right = w * (w.transpose() * w + Matrix::Identity(d, d)).inverse();
  return (left - right).cwiseAbs().maxCoeff();
}

void stream_lsm_rows(
    const Matrix& w, const Vector& theta, Index count, Index batch,
    SeededRng& rng,
    const std::function<void(const Matrix& x, const Vector& y)>& sink) {
  const Index p = w.rows();
  const Index d = w.cols();
  Index remaining = count;
  while (remaining > 0) {
    const Index b = std::min(batch, remaining);
    Matrix z = gaussian_matrix(b, d, rng);
    Matrix x = gaussian_matrix(b, p, rng);
    x.noalias() += z * w.transpose();
    Vector y = z * theta;
    sink(x, y);
    remaining -= b;
  }
}

double CovarianceCheck::max_err() const {
  return std::max(err_yy, std::max(err_xy, err_xx));
}

CovarianceCheck lsm_arm_covariance_check(const ModelConfig& config,
                                         Index sample_count) {
  config.validate();
  if (sample_count < 1000)
    throw Error("lsm_arm_covariance_check: need at least 1000 samples");

  const SeededRng root(config.seed);
  SeededRng rng_w = root.substream(kStreamW);
  SeededRng rng_rows = root.substream(kStreamU);

  const Index p = config.p;
  Matrix w = make_w(config.d, p, config.gamma, rng_w);

  // Second-moment accumulation of the joint vector (y, x^T); the model is
  // centered so this is the covariance.
  Matrix moment = Matrix::Zero(p + 1, p + 1);
  stream_lsm_rows(w, config.theta, sample_count, 2048, rng_rows,
                  [&](const Matrix& x, const Vector& y) {
                    Matrix joint(x.rows(), p + 1);
                    joint.col(0) = y;
                    joint.rightCols(p) = x;
                    moment.selfadjointView<Eigen::Lower>().rankUpdate(
                        joint.transpose());
                  });
  moment /= static_cast<double>(sample_count);
  moment.triangularView<Eigen::StrictlyUpper>() = moment.transpose();

  const double theta2 = config.theta.squaredNorm();
  Vector w_theta = w * config.theta;
  Matrix sigma = Matrix::Identity(p, p);
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(w);
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();

  auto relative = [](double err, double denom) {
    return denom > 0.0 ? err / denom : err;
  };

  CovarianceCheck check;
  check.err_yy = relative(std::abs(moment(0, 0) - theta2), theta2);
  check.err_xy =
      relative((moment.col(0).tail(p) - w_theta).norm(), w_theta.norm());
  check.err_xx = relative(
      (moment.bottomRightCorner(p, p) - sigma).norm(), sigma.norm());
  return check;
}

}  // namespace linforget
