#include "msvm/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "msvm/error.hpp"

namespace msvm {

namespace {

void require_alpha_shape(const Matrix& alpha, const DualProblem& problem, const char* op) {
  if (alpha.rows() != problem.samples() || alpha.cols() != problem.labels()) {
    throw DimensionError(std::string(op) + ": alpha is " + alpha.shape_string() +
                         ", problem is " + std::to_string(problem.samples()) + "x" +
                         std::to_string(problem.labels()));
  }
}

double clamp_box(double v, double c) { return std::min(c, std::max(0.0, v)); }

}  // namespace

void SolverOptions::validate() const {
  if (!(tol > 0.0)) throw ParameterError("solver tol must be positive");
  if (max_iter < 1) throw ParameterError("solver max_iter must be at least 1");
}

DualProblem::DualProblem(std::shared_ptr<const Matrix> kbar, LabelMatrix y, double c)
    : kbar_(std::move(kbar)), y_(std::move(y)), c_(c) {
  if (!kbar_ || kbar_->empty()) throw DimensionError("dual problem: empty Gram matrix");
  const Matrix& k = *kbar_;
  if (k.rows() != k.cols()) {
    throw DimensionError("dual problem: Gram matrix must be square, got " + k.shape_string());
  }
  if (y_.rows() != k.rows()) {
    throw DimensionError("dual problem: labels have " + std::to_string(y_.rows()) +
                         " rows, Gram matrix " + k.shape_string());
  }
  if (!(c_ > 0.0) || !std::isfinite(c_)) {
    throw ParameterError("dual problem: c must be positive, got " + std::to_string(c_));
  }
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = i + 1; j < k.cols(); ++j) {
      if (std::abs(k(i, j) - k(j, i)) > 1e-10) {
        throw ParameterError("dual problem: Gram matrix is not symmetric at (" +
                             std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

DualProblem::DualProblem(Matrix kbar, LabelMatrix y, double c)
    : DualProblem(std::make_shared<const Matrix>(std::move(kbar)), std::move(y), c) {}

double dual_objective(const Matrix& alpha, const DualProblem& problem) {
  require_alpha_shape(alpha, problem, "dual_objective");
  const Matrix p = hadamard(alpha, problem.y().values());
  const Matrix kp = multiply(problem.kbar(), p);
  double linear = 0.0;
  for (double v : alpha.values()) linear += v;
  return 0.5 * trace_inner(p, kp) - linear;
}

Matrix dual_gradient(const Matrix& alpha, const DualProblem& problem) {
  require_alpha_shape(alpha, problem, "dual_gradient");
  const Matrix& y = problem.y().values();
  Matrix g = hadamard(multiply(problem.kbar(), hadamard(alpha, y)), y);
  for (double& v : g.values()) v -= 1.0;
  return g;
}

double lipschitz_constant(const Matrix& kbar) { return frobenius_norm(kbar); }

Matrix project_box(const Matrix& m, double c) {
  if (!(c > 0.0)) throw ParameterError("project_box: c must be positive, got " + std::to_string(c));
  Matrix out = m;
  for (double& v : out.values()) v = clamp_box(v, c);
  return out;
}

double next_momentum(double z) { return (1.0 + std::sqrt(1.0 + 4.0 * z * z)) / 2.0; }

DualSolution agd_solve(const DualProblem& problem, const SolverOptions& options) {
  options.validate();
  const Matrix& kbar = problem.kbar();
  const double c = problem.c();
  const double step = 1.0 / lipschitz_constant(kbar);

  const auto yv = problem.y().values().values();
  const std::size_t count = yv.size();
  const std::size_t n = problem.y().rows();
  const std::size_t m = problem.y().cols();
  Matrix alpha(n, m, 0.0);
  Matrix next(n, m, 0.0);
  Matrix delta(n, m, 0.0);
  Matrix weighted(n, m, 0.0);
  Matrix product(n, m, 0.0);
  auto av = alpha.values();
  auto nv = next.values();
  auto dv = delta.values();
  auto wv = weighted.values();
  auto pv = product.values();

  double z = 1.0;
  std::size_t iteration = 0;
  bool converged = false;
  bool small_step = false;
  while (iteration < options.max_iter) {
    ++iteration;
    for (std::size_t k = 0; k < count; ++k) wv[k] = dv[k] * yv[k];
    multiply_into(kbar, weighted, product);

    double step_sq = 0.0;
    double alpha_sq = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double grad = pv[k] * yv[k] - 1.0;
      if (!std::isfinite(grad)) {
        throw NumericError("agd_solve: non-finite gradient at iteration " +
                               std::to_string(iteration),
                           iteration);
      }
      nv[k] = clamp_box(dv[k] - step * grad, c);
      const double diff = nv[k] - av[k];
      step_sq += diff * diff;
      alpha_sq += av[k] * av[k];
    }

    const double z_next = next_momentum(z);
    const double momentum = (z - 1.0) / z_next;
    for (std::size_t k = 0; k < count; ++k) {
      dv[k] = clamp_box(nv[k] + momentum * (nv[k] - av[k]), c);
    }
    z = z_next;
    std::swap(alpha, next);
    av = alpha.values();
    nv = next.values();

    // A clipped extrapolation point can repeat and give an exact zero step
    // away from the optimum; the following step starts from alpha itself, so
    // two small steps in a row are required.
    const bool small = std::sqrt(step_sq) <= options.tol * std::max(1.0, std::sqrt(alpha_sq));
    if (small && small_step) {
      converged = true;
      break;
    }
    small_step = small;
  }

  DualSolution solution;
  solution.alpha = std::move(alpha);
  solution.iterations = iteration;
  solution.converged = converged;
  solution.objective = dual_objective(solution.alpha, problem);
  return solution;
}

}  // namespace msvm
