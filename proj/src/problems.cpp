#include "adprox/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "adprox/prox_ops.hpp"

namespace adprox {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

// Entries are drawn row by row so the fill order never depends on storage order.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols, double stddev = 1.0) {
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = normal(rng);
  return M;
}

Vector gaussian_vector(Rng& rng, Index n, double stddev = 1.0) {
  std::normal_distribution<double> normal(0.0, stddev);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

void check_size(const Vector& x, Index d, const char* who) {
  if (x.size() != d)
    throw ContractError(std::string(who) + ": expected dimension " + std::to_string(d) + ", got " +
                        std::to_string(x.size()));
}

// ---------------------------------------------------------------------------

class CounterexampleFunction final : public SmoothFunction {
 public:
  Index dimension() const override { return 1; }
  double value(const Vector& x) const override {
    check_size(x, 1, "counterexample");
    return counterexample_f(x[0]).first;
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, 1, "counterexample");
    return Vector::Constant(1, counterexample_f(x[0]).second);
  }
  std::optional<double> lipschitz() const override { return 1.0; }
};

class QuadraticFunction final : public SmoothFunction {
 public:
  QuadraticFunction(Matrix Q, Vector c, double L) : Q_(std::move(Q)), c_(std::move(c)), L_(L) {}
  Index dimension() const override { return c_.size(); }
  double value(const Vector& x) const override {
    check_size(x, c_.size(), "quadratic");
    return 0.5 * x.dot(Q_ * x) - c_.dot(x);
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, c_.size(), "quadratic");
    return Q_ * x - c_;
  }
  std::optional<double> lipschitz() const override { return L_; }

 private:
  Matrix Q_;
  Vector c_;
  double L_;
};

class LeastSquaresFunction final : public SmoothFunction {
 public:
  LeastSquaresFunction(Matrix A, Vector b, double L) : A_(std::move(A)), b_(std::move(b)), L_(L) {}
  Index dimension() const override { return A_.cols(); }
  double value(const Vector& x) const override {
    check_size(x, A_.cols(), "least squares");
    return 0.5 * (A_ * x - b_).squaredNorm();
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, A_.cols(), "least squares");
    return A_.transpose() * (A_ * x - b_);
  }
  std::optional<double> lipschitz() const override { return L_; }

 private:
  Matrix A_;
  Vector b_;
  double L_;
};

// f(x) = (1/N) sum log(1 + exp(-y_i a_i^T x)), rows of A are a_i.
class LogisticFunction final : public SmoothFunction {
 public:
  LogisticFunction(Matrix A, Vector labels, double L) : A_(std::move(A)), y_(std::move(labels)), L_(L) {}
  Index dimension() const override { return A_.cols(); }
  double value(const Vector& x) const override {
    check_size(x, A_.cols(), "logistic");
    const Vector margins = y_.cwiseProduct(A_ * x);
    double total = 0.0;
    for (Index i = 0; i < margins.size(); ++i) total += softplus(-margins[i]);
    return total / static_cast<double>(margins.size());
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, A_.cols(), "logistic");
    const Vector margins = y_.cwiseProduct(A_ * x);
    Vector weights(margins.size());
    // d/dm log(1 + e^{-m}) = -sigmoid(-m)
    for (Index i = 0; i < margins.size(); ++i) weights[i] = -y_[i] * sigmoid(-margins[i]);
    return A_.transpose() * weights / static_cast<double>(margins.size());
  }
  std::optional<double> lipschitz() const override { return L_; }

 private:
  static double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
  static double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
  }
  Matrix A_;
  Vector y_;
  double L_;
};

class QuarticFunction final : public SmoothFunction {
 public:
  Index dimension() const override { return 1; }
  double value(const Vector& x) const override {
    check_size(x, 1, "quartic");
    const double t = x[0] * x[0];
    return t * t;
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, 1, "quartic");
    return Vector::Constant(1, 4.0 * x[0] * x[0] * x[0]);
  }
};

// f(X) = -log det X + tr(XY). Uses LU so that nonsymmetric probes (finite
// differences) see the true function of all n^2 entries.
class MleFunction final : public SmoothFunction {
 public:
  MleFunction(Index n, Matrix Y) : n_(n), Y_(std::move(Y)) {}
  Index dimension() const override { return n_ * n_; }
  double value(const Vector& x) const override {
    check_size(x, n_ * n_, "mle");
    const Matrix X = unflatten(x, n_, n_);
    Eigen::PartialPivLU<Matrix> lu(X);
    const Matrix& LU = lu.matrixLU();
    double log_abs_det = 0.0;
    int sign = static_cast<int>(lu.permutationP().determinant());
    for (Index i = 0; i < n_; ++i) {
      const double d = LU(i, i);
      if (d == 0.0) return kInf;
      if (d < 0.0) sign = -sign;
      log_abs_det += std::log(std::abs(d));
    }
    if (sign < 0) return kInf;
    return -log_abs_det + X.cwiseProduct(Y_.transpose()).sum();
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, n_ * n_, "mle");
    const Matrix X = unflatten(x, n_, n_);
    Eigen::PartialPivLU<Matrix> lu(X);
    if (!(lu.rcond() > 0.0)) throw NumericalError("mle gradient: singular X");
    const Matrix inv = lu.inverse();
    return flatten(Y_.transpose() - inv.transpose());
  }

 private:
  Index n_;
  Matrix Y_;
};

class MaskedResidualFunction final : public SmoothFunction {
 public:
  MaskedResidualFunction(Vector target, Vector mask) : target_(std::move(target)), mask_(std::move(mask)) {}
  Index dimension() const override { return target_.size(); }
  double value(const Vector& x) const override {
    check_size(x, target_.size(), "lrmc");
    return 0.5 * mask_.cwiseProduct(x - target_).squaredNorm();
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, target_.size(), "lrmc");
    return mask_.cwiseProduct(x - target_);
  }
  std::optional<double> lipschitz() const override { return 1.0; }

 private:
  Vector target_;
  Vector mask_;  // 1 on Omega, 0 elsewhere (row-major flattened)
};

class CurveLengthFunction final : public SmoothFunction {
 public:
  explicit CurveLengthFunction(Index n) : n_(n) {}
  Index dimension() const override { return n_; }
  double value(const Vector& x) const override {
    check_size(x, n_, "min curve");
    double total = std::hypot(1.0, x[0]);
    for (Index i = 0; i + 1 < n_; ++i) total += std::hypot(1.0, x[i + 1] - x[i]);
    return total;
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, n_, "min curve");
    Vector g = Vector::Zero(n_);
    g[0] = x[0] / std::hypot(1.0, x[0]);
    for (Index i = 0; i + 1 < n_; ++i) {
      const double d = x[i + 1] - x[i];
      const double t = d / std::hypot(1.0, d);
      g[i + 1] += t;
      g[i] -= t;
    }
    return g;
  }
  // Hessian <= diag(1, 0, ...) + path Laplacian, whose norm is below 4.
  std::optional<double> lipschitz() const override { return 5.0; }

 private:
  Index n_;
};

// Point = (U row-major n x r, V row-major n x r).
class NmfFunction final : public SmoothFunction {
 public:
  NmfFunction(Matrix A, Index r) : A_(std::move(A)), r_(r) {}
  Index dimension() const override { return 2 * A_.rows() * r_; }
  double value(const Vector& x) const override {
    check_size(x, dimension(), "nmf");
    const Index n = A_.rows();
    const Matrix U = unflatten(x, n, r_);
    const Matrix V = unflatten(x, n, r_, n * r_);
    return 0.5 * (U * V.transpose() - A_).squaredNorm();
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, dimension(), "nmf");
    const Index n = A_.rows();
    const Matrix U = unflatten(x, n, r_);
    const Matrix V = unflatten(x, n, r_, n * r_);
    const Matrix R = U * V.transpose() - A_;
    Vector g(dimension());
    g.head(n * r_) = flatten(R * V);
    g.tail(n * r_) = flatten(R.transpose() * U);
    return g;
  }

 private:
  Matrix A_;
  Index r_;
};

// f(lambda, mu) = e^{-mu-1} sum_i e^{-a_i^T lambda} + <b, lambda> + mu, a_i columns of A (m x n).
class DualEntropyFunction final : public SmoothFunction {
 public:
  DualEntropyFunction(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {}
  Index dimension() const override { return A_.rows() + 1; }
  double value(const Vector& x) const override {
    check_size(x, dimension(), "dual entropy");
    const Index m = A_.rows();
    const Shifted s = shifted(x);
    if (s.log_term > kMaxExponent) return kInf;
    return std::exp(s.log_term) + b_.dot(x.head(m)) + x[m];
  }
  Vector gradient(const Vector& x) const override {
    check_size(x, dimension(), "dual entropy");
    const Index m = A_.rows();
    const Shifted s = shifted(x);
    if (s.log_term > kMaxExponent) throw NumericalError("dual entropy gradient overflow");
    const double term = std::exp(s.log_term);
    Vector g(dimension());
    g.head(m) = -term * (A_ * s.weights) + b_;
    g[m] = 1.0 - term;
    return g;
  }

 private:
  static constexpr double kMaxExponent = 700.0;
  struct Shifted {
    double log_term;  // log of e^{-mu-1} sum_i e^{-a_i^T lambda}
    Vector weights;   // softmax of -A^T lambda
  };
  Shifted shifted(const Vector& x) const {
    const Index m = A_.rows();
    const Vector s = -(A_.transpose() * x.head(m));
    const double smax = s.maxCoeff();
    Vector w = (s.array() - smax).exp().matrix();
    const double total = w.sum();
    w /= total;
    return {-x[m] - 1.0 + smax + std::log(total), std::move(w)};
  }
  Matrix A_;
  Vector b_;
};

double param(const ParameterMap& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw ContractError("missing parameter '" + key + "'");
  return it->second;
}

Index param_index(const ParameterMap& p, const std::string& key) {
  const double v = param(p, key);
  if (v < 1 || v != std::floor(v)) throw ContractError("parameter '" + key + "' must be a positive integer");
  return static_cast<Index>(v);
}

ProblemInstance base_instance(ProblemKind kind, std::uint64_t seed, std::shared_ptr<const SmoothFunction> f,
                              std::shared_ptr<const ProxFriendly> g, CostModel cost) {
  ProblemInstance inst;
  inst.kind = kind;
  inst.seed = seed;
  inst.composite.f = std::move(f);
  inst.composite.g = std::move(g);
  inst.composite.cost = cost;
  inst.composite.label = problem_name(kind);
  return inst;
}

CostModel unit_cost() { return CostModel::for_metric(EssentialMetric::GradientsAndValues, ProxKind::Identity); }

}  // namespace

std::string problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Quadratic: return "quadratic";
    case ProblemKind::LeastSquares: return "least_squares";
    case ProblemKind::Logistic: return "logistic";
    case ProblemKind::Quartic: return "quartic";
    case ProblemKind::Counterexample: return "counterexample";
    case ProblemKind::Mle: return "mle";
    case ProblemKind::Lrmc: return "lrmc";
    case ProblemKind::MinCurve: return "min_curve";
    case ProblemKind::Nmf: return "nmf";
    case ProblemKind::DualEntropy: return "dual_entropy";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& name) {
  for (auto k : {ProblemKind::Quadratic, ProblemKind::LeastSquares, ProblemKind::Logistic, ProblemKind::Quartic,
                 ProblemKind::Counterexample, ProblemKind::Mle, ProblemKind::Lrmc, ProblemKind::MinCurve,
                 ProblemKind::Nmf, ProblemKind::DualEntropy})
    if (problem_name(k) == name) return k;
  throw ContractError("unknown problem '" + name + "'");
}

double counterexample_b() { return 2.0 * std::log(2.0) - 1.5; }

std::pair<double, double> counterexample_f(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return {0.5 * x * x, x};
  const double value = kCounterexampleA * (ax - std::log1p(ax)) + counterexample_b();
  const double slope = kCounterexampleA * x / (1.0 + ax);
  return {value, slope};
}

ProblemInstance make_counterexample(double x0) {
  auto inst = base_instance(ProblemKind::Counterexample, 0, std::make_shared<const CounterexampleFunction>(),
                            zero_regularizer(), unit_cost());
  inst.parameters = {{"x0", x0}};
  inst.x0 = Vector::Constant(1, x0);
  inst.closed_form_solution = Vector::Zero(1);
  inst.composite.layout.blocks = {{1, 1}};
  return inst;
}

ProblemInstance make_quadratic(std::uint64_t seed, Index n, double condition_number) {
  if (n < 1) throw ContractError("quadratic: n must be >= 1");
  if (!(condition_number >= 1.0)) throw ContractError("quadratic: condition number must be >= 1");
  Rng rng(seed);
  const Matrix G = gaussian_matrix(rng, n, n);
  const Matrix Qo = Eigen::HouseholderQR<Matrix>(G).householderQ();
  Vector spectrum(n);
  for (Index i = 0; i < n; ++i) {
    const double t = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    spectrum[i] = std::pow(condition_number, t);
  }
  Matrix Q = Qo * spectrum.asDiagonal() * Qo.transpose();
  Q = (0.5 * (Q + Q.transpose())).eval();
  const Vector c = gaussian_vector(rng, n);
  auto inst = base_instance(ProblemKind::Quadratic, seed,
                            std::make_shared<const QuadraticFunction>(Q, c, spectrum.maxCoeff()),
                            zero_regularizer(), unit_cost());
  inst.parameters = {{"n", double(n)}, {"condition_number", condition_number}};
  inst.x0 = gaussian_vector(rng, n, 3.0);
  inst.closed_form_solution = Q.ldlt().solve(c);
  inst.composite.layout.blocks = {{n, 1}};
  return inst;
}

ProblemInstance make_least_squares(std::uint64_t seed, Index n, Index d) {
  if (n < 1 || d < 1) throw ContractError("least squares: sizes must be >= 1");
  Rng rng(seed);
  const Matrix A = gaussian_matrix(rng, n, d);
  const Vector b = gaussian_vector(rng, n);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  auto inst = base_instance(ProblemKind::LeastSquares, seed,
                            std::make_shared<const LeastSquaresFunction>(A, b, es.eigenvalues().maxCoeff()),
                            zero_regularizer(), unit_cost());
  inst.parameters = {{"n", double(n)}, {"d", double(d)}};
  inst.x0 = gaussian_vector(rng, d);
  if (n >= d) inst.closed_form_solution = A.colPivHouseholderQr().solve(b);
  inst.composite.layout.blocks = {{d, 1}};
  return inst;
}

ProblemInstance make_logistic(std::uint64_t seed, Index d, Index samples) {
  if (d < 1) throw ContractError("logistic: d must be >= 1");
  if (samples == 0) samples = 4 * d;
  Rng rng(seed);
  const Matrix A = gaussian_matrix(rng, samples, d);
  // labels independent of the features keep the data non-separable, so a minimizer exists
  std::bernoulli_distribution coin(0.5);
  Vector labels(samples);
  for (Index i = 0; i < samples; ++i) labels[i] = coin(rng) ? 1.0 : -1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  // L = lambda_max(A^T A) / (4 N); reduces to ||a||^2 / 4 for a single sample
  const double L = es.eigenvalues().maxCoeff() / (4.0 * static_cast<double>(samples));
  auto inst = base_instance(ProblemKind::Logistic, seed, std::make_shared<const LogisticFunction>(A, labels, L),
                            zero_regularizer(), unit_cost());
  inst.parameters = {{"d", double(d)}, {"samples", double(samples)}};
  inst.x0 = gaussian_vector(rng, d);
  inst.composite.layout.blocks = {{d, 1}};
  return inst;
}

ProblemInstance make_quartic() {
  auto inst = base_instance(ProblemKind::Quartic, 0, std::make_shared<const QuarticFunction>(), zero_regularizer(),
                            unit_cost());
  inst.x0 = Vector::Constant(1, 2.0);
  inst.closed_form_solution = Vector::Zero(1);
  inst.globally_smooth = false;
  inst.composite.layout.blocks = {{1, 1}};
  return inst;
}

ProblemInstance make_mle(std::uint64_t seed, Index n, double l, double u, Index M) {
  if (n < 1 || M < 1) throw ContractError("mle: n and M must be >= 1");
  if (!(0.0 < l && l < u)) throw ContractError("mle: need 0 < l < u");
  Rng rng(seed);
  const Vector y = gaussian_vector(rng, n, 10.0);
  Matrix Y = Matrix::Zero(n, n);
  for (Index i = 0; i < M; ++i) {
    const Vector yi = y + gaussian_vector(rng, n);
    Y.noalias() += yi * yi.transpose();
  }
  Y /= static_cast<double>(M);
  Y = (0.5 * (Y + Y.transpose())).eval();
  auto inst = base_instance(ProblemKind::Mle, seed, std::make_shared<const MleFunction>(n, Y),
                            spectral_box_indicator(n, l, u),
                            CostModel::for_metric(EssentialMetric::Eigendecompositions, ProxKind::Eigendecomposition));
  inst.parameters = {{"n", double(n)}, {"l", l}, {"u", u}, {"M", double(M)}};
  inst.x0 = flatten(Matrix::Identity(n, n) * (0.5 * (l + u)));
  inst.composite.layout.blocks = {{n, n}};
  return inst;
}

ProblemInstance make_lrmc(std::uint64_t seed, Index n, Index r, double fraction) {
  if (n < 1 || r < 1) throw ContractError("lrmc: n and r must be >= 1");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ContractError("lrmc: fraction must lie in (0, 1]");
  Rng rng(seed);
  const Matrix U = gaussian_matrix(rng, n, r);
  const Matrix V = gaussian_matrix(rng, n, r);
  const Matrix A = U * V.transpose();

  // Omega: partial Fisher-Yates over the n^2 flat indices
  const Index total = n * n;
  const Index count = std::max<Index>(1, static_cast<Index>(std::llround(fraction * static_cast<double>(total))));
  std::vector<Index> idx(total);
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, total - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  Vector mask = Vector::Zero(total);
  for (Index i = 0; i < count; ++i) mask[idx[i]] = 1.0;

  auto inst = base_instance(ProblemKind::Lrmc, seed,
                            std::make_shared<const MaskedResidualFunction>(flatten(A), mask),
                            nuclear_ball_indicator(n, n, static_cast<double>(r)),
                            CostModel::for_metric(EssentialMetric::Svds, ProxKind::Svd));
  inst.parameters = {{"n", double(n)}, {"r", double(r)}, {"fraction", fraction}};
  inst.x0 = inst.composite.g->prox(1.0, Vector::Zero(total));
  inst.composite.layout.blocks = {{n, n}};
  return inst;
}

ProblemInstance make_min_curve(std::uint64_t seed, Index m, Index n) {
  if (m < 1 || n < 1) throw ContractError("min curve: sizes must be >= 1");
  if (m > n) throw ContractError("min curve: need m <= n");
  Rng rng(seed);
  std::shared_ptr<const AffineProjector> projector;
  Vector w;
  for (int attempt = 0; attempt < 10 && !projector; ++attempt) {
    Matrix A = gaussian_matrix(rng, m, n);
    w = gaussian_vector(rng, n);
    Vector b = A * w;
    try {
      projector = std::make_shared<const AffineProjector>(std::move(A), std::move(b));
    } catch (const NumericalError&) {
      projector.reset();
    }
  }
  if (!projector) throw NumericalError("min curve: A rank deficient after 10 resamples");
  auto inst = base_instance(ProblemKind::MinCurve, seed, std::make_shared<const CurveLengthFunction>(n),
                            affine_indicator(projector),
                            CostModel::for_metric(EssentialMetric::Projections, ProxKind::Projection));
  inst.parameters = {{"m", double(m)}, {"n", double(n)}};
  inst.x0 = projector->apply(Vector::Zero(n));
  inst.composite.layout.blocks = {{n, 1}};
  return inst;
}

ProblemInstance make_nmf(std::uint64_t seed, Index n, Index r) {
  if (n < 1 || r < 1) throw ContractError("nmf: n and r must be >= 1");
  Rng rng(seed);
  const Matrix B = gaussian_matrix(rng, n, r).cwiseMax(0.0);
  const Matrix C = gaussian_matrix(rng, n, r).cwiseMax(0.0);
  const Matrix A = B * C.transpose();
  auto inst = base_instance(ProblemKind::Nmf, seed, std::make_shared<const NmfFunction>(A, r),
                            nonneg_indicator(2 * n * r),
                            CostModel::for_metric(EssentialMetric::MatMulUnits, ProxKind::Projection));
  inst.parameters = {{"n", double(n)}, {"r", double(r)}};
  Vector x0(2 * n * r);
  x0.head(n * r) = flatten(gaussian_matrix(rng, n, r).cwiseAbs());
  x0.tail(n * r) = flatten(gaussian_matrix(rng, n, r).cwiseAbs());
  inst.x0 = x0;
  inst.convex = false;
  inst.globally_smooth = false;
  inst.composite.layout.blocks = {{n, r}, {n, r}};
  return inst;
}

ProblemInstance make_dual_entropy(std::uint64_t seed, Index m, Index n) {
  if (m < 1 || n < 1) throw ContractError("dual entropy: sizes must be >= 1");
  Rng rng(seed);
  const Matrix A = gaussian_matrix(rng, m, n);
  // uniform point of the unit simplex: normalized exponential draws (all entries positive)
  std::exponential_distribution<double> expo(1.0);
  Vector w(n);
  for (Index i = 0; i < n; ++i) w[i] = expo(rng);
  w /= w.sum();
  const Vector b = A * w;
  auto inst = base_instance(ProblemKind::DualEntropy, seed, std::make_shared<const DualEntropyFunction>(A, b),
                            dual_entropy_domain_indicator(m),
                            CostModel::for_metric(EssentialMetric::MatVecUnits, ProxKind::Projection));
  inst.parameters = {{"m", double(m)}, {"n", double(n)}};
  inst.x0 = Vector::Zero(m + 1);
  inst.globally_smooth = false;
  inst.composite.layout.blocks = {{m + 1, 1}};
  return inst;
}

ParameterMap default_parameters(ProblemKind kind, Scale scale) {
  const bool paper = scale == Scale::Paper;
  switch (kind) {
    case ProblemKind::Quadratic: return {{"n", 20}, {"condition_number", 100}};
    case ProblemKind::LeastSquares: return {{"n", 40}, {"d", 20}};
    case ProblemKind::Logistic: return {{"d", 10}, {"samples", 40}};
    case ProblemKind::Quartic: return {};
    case ProblemKind::Counterexample: return {{"x0", 12}};
    case ProblemKind::Mle:
      return paper ? ParameterMap{{"n", 100}, {"l", 0.1}, {"u", 10}, {"M", 50}}
                   : ParameterMap{{"n", 50}, {"l", 0.1}, {"u", 10}, {"M", 25}};
    case ProblemKind::Lrmc:
      return paper ? ParameterMap{{"n", 100}, {"r", 20}, {"fraction", 0.2}}
                   : ParameterMap{{"n", 60}, {"r", 10}, {"fraction", 0.2}};
    case ProblemKind::MinCurve:
      return paper ? ParameterMap{{"m", 50}, {"n", 200}} : ParameterMap{{"m", 20}, {"n", 100}};
    case ProblemKind::Nmf:
      return paper ? ParameterMap{{"n", 100}, {"r", 20}} : ParameterMap{{"n", 60}, {"r", 10}};
    case ProblemKind::DualEntropy:
      return paper ? ParameterMap{{"m", 500}, {"n", 100}} : ParameterMap{{"m", 100}, {"n", 50}};
  }
  return {};
}

ProblemInstance make_problem(ProblemKind kind, const ParameterMap& params, std::uint64_t seed) {
  ParameterMap p = default_parameters(kind, Scale::Desk);
  for (const auto& [key, value] : params) {
    if (!p.contains(key))
      throw ContractError("unknown parameter '" + key + "' for problem " + problem_name(kind));
    p[key] = value;
  }
  switch (kind) {
    case ProblemKind::Quadratic: return make_quadratic(seed, param_index(p, "n"), param(p, "condition_number"));
    case ProblemKind::LeastSquares: return make_least_squares(seed, param_index(p, "n"), param_index(p, "d"));
    case ProblemKind::Logistic: return make_logistic(seed, param_index(p, "d"), param_index(p, "samples"));
    case ProblemKind::Quartic: return make_quartic();
    case ProblemKind::Counterexample: return make_counterexample(param(p, "x0"));
    case ProblemKind::Mle:
      return make_mle(seed, param_index(p, "n"), param(p, "l"), param(p, "u"), param_index(p, "M"));
    case ProblemKind::Lrmc: return make_lrmc(seed, param_index(p, "n"), param_index(p, "r"), param(p, "fraction"));
    case ProblemKind::MinCurve: return make_min_curve(seed, param_index(p, "m"), param_index(p, "n"));
    case ProblemKind::Nmf: return make_nmf(seed, param_index(p, "n"), param_index(p, "r"));
    case ProblemKind::DualEntropy: return make_dual_entropy(seed, param_index(p, "m"), param_index(p, "n"));
  }
  throw ContractError("unhandled problem kind");
}

}  // namespace adprox
