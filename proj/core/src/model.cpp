#include "msvm/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <thread>

#include "msvm/error.hpp"

namespace msvm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate_training(const Matrix& x, const LabelMatrix& y, double c) {
  if (x.empty() || y.empty()) throw DimensionError("training data is empty");
  if (x.rows() != y.rows()) {
    throw DimensionError("features have " + std::to_string(x.rows()) + " rows, labels " +
                         std::to_string(y.rows()));
  }
  if (x.rows() < 2) throw DimensionError("at least two training samples are required");
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ParameterError("c must be positive, got " + std::to_string(c));
  }
}

void require_two_classes(const LabelMatrix& y) {
  for (std::size_t j = 0; j < y.cols(); ++j) {
    if (!y.column_has_both_classes(j)) {
      throw DegenerateLabelError("label column " + std::to_string(j) +
                                     " contains a single class in the training data",
                                 j);
    }
  }
}

void require_hinge(const TrainedModel& model, const char* op) {
  if (model.kind == ModelKind::LeastSquares) {
    throw ParameterError(std::string(op) + " needs a hinge-loss model");
  }
}

void require_training_data(const TrainedModel& model, const Matrix& x, const LabelMatrix& y,
                           const char* op) {
  if (x.rows() != model.coeff.rows() || x.cols() != model.x_train.cols() ||
      y.rows() != model.coeff.rows() || y.cols() != model.coeff.cols()) {
    throw DimensionError(std::string(op) + ": data " + x.shape_string() + " / labels " +
                         y.values().shape_string() + " do not match model trained on " +
                         model.x_train.shape_string() + " with " + model.coeff.shape_string() +
                         " coefficients");
  }
}

TrainedModel hinge_model(ModelKind kind, const Matrix& x, const KernelSpec& kernel, double c) {
  TrainedModel model;
  model.kind = kind;
  model.kernel = kernel;
  model.x_train = x;
  model.c = c;
  return model;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::MatrixSvm: return "matrix";
    case ModelKind::BinaryRelevance: return "br";
    case ModelKind::LeastSquares: return "ls";
  }
  return "unknown";
}

std::size_t TrainedModel::labels() const noexcept {
  return kind == ModelKind::LeastSquares ? weights.cols() : coeff.cols();
}

std::size_t TrainedModel::features() const noexcept {
  if (kind == ModelKind::LeastSquares) return weights.rows() == 0 ? 0 : weights.rows() - 1;
  return x_train.cols();
}

TrainedModel fit_matrix_svm(const Matrix& x, const LabelMatrix& y, const KernelSpec& kernel,
                            double c, const SolverOptions& options) {
  validate_training(x, y, c);
  require_two_classes(y);
  options.validate();

  TrainedModel model = hinge_model(ModelKind::MatrixSvm, x, kernel, c);
  const auto start = Clock::now();
  DualProblem problem(augmented_gram(x, x, kernel), y, c);
  DualSolution solution = agd_solve(problem, options);
  model.fit_seconds = seconds_since(start);

  model.coeff = hadamard(solution.alpha, y.values());
  model.solver_iterations = solution.iterations;
  model.converged = solution.converged;
  return model;
}

TrainedModel fit_br_svm(const Matrix& x, const LabelMatrix& y, const KernelSpec& kernel, double c,
                        const SolverOptions& options, const BinaryRelevanceOptions& br) {
  validate_training(x, y, c);
  require_two_classes(y);
  options.validate();
  if (br.parallel_columns && !br.share_gram) {
    throw ParameterError("parallel BR columns require the shared-Gram mode");
  }

  TrainedModel model = hinge_model(ModelKind::BinaryRelevance, x, kernel, c);
  model.shared_gram = br.share_gram;
  model.coeff = Matrix(x.rows(), y.cols(), 0.0);
  const std::size_t m = y.cols();
  std::vector<DualSolution> solutions(m);
  std::vector<double> seconds(m, 0.0);

  std::shared_ptr<const Matrix> shared;
  double shared_seconds = 0.0;
  if (br.share_gram) {
    const auto start = Clock::now();
    shared = std::make_shared<const Matrix>(augmented_gram(x, x, kernel));
    shared_seconds = seconds_since(start);
  }

  auto solve_column = [&](std::size_t j) {
    const auto start = Clock::now();
    auto kbar = shared ? shared : std::make_shared<const Matrix>(augmented_gram(x, x, kernel));
    DualProblem problem(std::move(kbar), y.column(j), c);
    solutions[j] = agd_solve(problem, options);
    seconds[j] = seconds_since(start);
  };

  if (br.parallel_columns) {
    std::vector<std::exception_ptr> errors(m);
    std::vector<std::thread> workers;
    workers.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
      workers.emplace_back([&, j] {
        try {
          solve_column(j);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t j = 0; j < m; ++j) solve_column(j);
  }

  model.fit_seconds = shared_seconds;
  for (std::size_t j = 0; j < m; ++j) {
    const DualSolution& s = solutions[j];
    for (std::size_t i = 0; i < x.rows(); ++i) model.coeff(i, j) = s.alpha(i, 0) * y.values()(i, j);
    model.fit_seconds += seconds[j];
    model.solver_iterations += s.iterations;
    model.converged = model.converged && s.converged;
  }
  return model;
}

SpdSolve solve_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw DimensionError("solve_spd: system " + a.shape_string() + " with right-hand side " +
                         b.shape_string());
  }
  const std::size_t n = a.rows();
  Matrix l(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw NumericError("solve_spd: matrix is not positive definite at pivot " +
                             std::to_string(j),
                         j);
    }
    l(j, j) = std::sqrt(diag);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }

  SpdSolve result;
  double lo = l(0, 0);
  double hi = l(0, 0);
  for (std::size_t i = 1; i < n; ++i) {
    lo = std::min(lo, l(i, i));
    hi = std::max(hi, l(i, i));
  }
  result.condition_estimate = (hi / lo) * (hi / lo);

  // Forward then backward substitution, one right-hand side column at a time.
  result.solution = Matrix(n, b.cols(), 0.0);
  std::vector<double> w(n);
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = b(i, c);
      for (std::size_t k = 0; k < i; ++k) v -= l(i, k) * w[k];
      w[i] = v / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double v = w[ii];
      for (std::size_t k = ii + 1; k < n; ++k) v -= l(k, ii) * result.solution(k, c);
      result.solution(ii, c) = v / l(ii, ii);
    }
  }
  return result;
}

TrainedModel fit_ls_matrix_svm(const Matrix& x, const LabelMatrix& y, double c) {
  validate_training(x, y, c);

  TrainedModel model;
  model.kind = ModelKind::LeastSquares;
  model.c = c;
  const auto start = Clock::now();
  const Matrix design = append_ones_column(x);
  const Matrix design_t = transpose(design);
  Matrix normal = multiply_transposed(design_t, design_t);
  const double ridge = 1.0 / (2.0 * c);
  for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += ridge;
  const Matrix rhs = multiply(design_t, y.values());
  SpdSolve solved = solve_spd(normal, rhs);
  model.fit_seconds = seconds_since(start);

  model.weights = std::move(solved.solution);
  if (solved.condition_estimate > 1e12) {
    model.warnings.push_back("least-squares normal matrix is ill-conditioned (estimate " +
                             std::to_string(solved.condition_estimate) + ")");
  }
  return model;
}

Matrix decision_scores(const TrainedModel& model, const Matrix& x_test) {
  if (x_test.cols() != model.features()) {
    throw DimensionError("decision_scores: model expects " + std::to_string(model.features()) +
                         " features, test data is " + x_test.shape_string());
  }
  if (model.kind == ModelKind::LeastSquares) {
    return multiply(append_ones_column(x_test), model.weights);
  }
  return multiply(augmented_gram(x_test, model.x_train, model.kernel), model.coeff);
}

LabelMatrix predict_multilabel(const Matrix& scores) { return LabelMatrix::from_signs(scores); }

MulticlassPrediction predict_multiclass(const Matrix& scores) {
  if (scores.cols() < 2) {
    throw DimensionError("predict_multiclass needs at least two classes, got " +
                         scores.shape_string());
  }
  MulticlassPrediction out;
  out.classes.resize(scores.rows());
  Matrix one_hot(scores.rows(), scores.cols(), -1.0);
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    auto row = scores.row(i);
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    out.classes[i] = best;
    one_hot(i, best) = 1.0;
  }
  out.one_hot = LabelMatrix(std::move(one_hot));
  return out;
}

PrimalDiagnostics primal_diagnostics(const TrainedModel& model, const Matrix& x,
                                     const LabelMatrix& y) {
  require_hinge(model, "primal_diagnostics");
  require_training_data(model, x, y, "primal_diagnostics");

  const Matrix kbar_train = augmented_gram(model.x_train, model.x_train, model.kernel);
  const double wtw = trace_inner(model.coeff, multiply(kbar_train, model.coeff));
  const Matrix z = decision_scores(model, x);

  PrimalDiagnostics d;
  d.slack = Matrix(z.rows(), z.cols(), 0.0);
  double slack_sum = 0.0;
  double alpha_sum = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
      const double q = std::max(0.0, 1.0 - y.values()(i, j) * z(i, j));
      d.slack(i, j) = q;
      slack_sum += q;
      alpha_sum += model.coeff(i, j) * y.values()(i, j);
    }
  }
  d.primal_objective = 0.5 * wtw + model.c * slack_sum;
  d.dual_objective = 0.5 * wtw - alpha_sum;
  d.duality_gap = d.primal_objective + d.dual_objective;
  return d;
}

KktReport kkt_report(const TrainedModel& model, const Matrix& x, const LabelMatrix& y,
                     double kkt_tol) {
  require_hinge(model, "kkt_report");
  require_training_data(model, x, y, "kkt_report");
  if (!(kkt_tol >= 0.0)) throw ParameterError("kkt_tol must be non-negative");

  const Matrix z = decision_scores(model, x);
  KktReport r;
  r.beta = Matrix(z.rows(), z.cols(), 0.0);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
      const double yv = y.values()(i, j);
      const double alpha = model.coeff(i, j) * yv;
      const double margin = yv * z(i, j);
      r.beta(i, j) = model.c - alpha;
      double miss = 0.0;
      ++r.total;
      if (alpha <= 0.0) {
        ++r.at_zero;
        miss = 1.0 - margin;
        if (miss > kkt_tol) ++r.zero_violations;
      } else if (alpha >= model.c) {
        ++r.at_upper;
        miss = margin - 1.0;
        if (miss > kkt_tol) ++r.upper_violations;
      } else {
        ++r.interior;
        miss = std::abs(margin - 1.0);
        if (miss > kkt_tol) ++r.interior_violations;
      }
      r.max_violation = std::max(r.max_violation, miss);
    }
  }
  return r;
}

TrainedModel prune_support_vectors(const TrainedModel& model) {
  if (model.kind == ModelKind::LeastSquares) return model;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < model.coeff.rows(); ++i) {
    auto row = model.coeff.row(i);
    if (std::any_of(row.begin(), row.end(), [](double v) { return v != 0.0; })) keep.push_back(i);
  }
  // A model with no support vectors keeps one row so the matrices stay non-empty.
  if (keep.empty()) keep.push_back(0);
  TrainedModel pruned = model;
  pruned.x_train = select_rows(model.x_train, keep);
  pruned.coeff = select_rows(model.coeff, keep);
  return pruned;
}

}  // namespace msvm
