#pragma once

#include <cstddef>
#include <memory>

#include "msvm/labels.hpp"
#include "msvm/matrix.hpp"

namespace msvm {

/// Stopping controls for agd_solve. The loop stops once two consecutive updates
/// have Frobenius norm at most tol * max(1, |alpha|_F), or after max_iter updates.
struct SolverOptions {
  double tol = 1e-5;
  std::size_t max_iter = 1000;

  /// Throws ParameterError unless tol > 0 and max_iter >= 1.
  void validate() const;
};

/// min_alpha 1/2 Tr((alpha o Y)^T Kbar (alpha o Y)) - Tr(E^T alpha),  0 <= alpha <= cE.
///
/// Kbar is held through a shared pointer so several problems (one per label
/// column, say) can reference a single Gram matrix.
class DualProblem {
 public:
  /// Throws DimensionError for non-square Kbar or a row-count mismatch with y,
  /// ParameterError for c <= 0 or asymmetry beyond 1e-10.
  DualProblem(std::shared_ptr<const Matrix> kbar, LabelMatrix y, double c);
  DualProblem(Matrix kbar, LabelMatrix y, double c);

  const Matrix& kbar() const noexcept { return *kbar_; }
  const std::shared_ptr<const Matrix>& shared_kbar() const noexcept { return kbar_; }
  const LabelMatrix& y() const noexcept { return y_; }
  double c() const noexcept { return c_; }
  std::size_t samples() const noexcept { return y_.rows(); }
  std::size_t labels() const noexcept { return y_.cols(); }

 private:
  std::shared_ptr<const Matrix> kbar_;
  LabelMatrix y_;
  double c_;
};

struct DualSolution {
  Matrix alpha;  ///< n x m, inside [0, c] entrywise
  std::size_t iterations = 0;
  double objective = 0.0;
  bool converged = false;
};

/// Objective value at alpha. Alpha need not be feasible.
double dual_objective(const Matrix& alpha, const DualProblem& problem);

/// (Kbar (alpha o Y)) o Y - E.
Matrix dual_gradient(const Matrix& alpha, const DualProblem& problem);

/// |Kbar|_F, the gradient's Lipschitz bound; the solver steps with 1 / this value.
double lipschitz_constant(const Matrix& kbar);

/// Entrywise clamp to [0, c]. Throws ParameterError for c <= 0.
Matrix project_box(const Matrix& m, double c);

/// Momentum recurrence z' = (1 + sqrt(1 + 4 z^2)) / 2.
double next_momentum(double z);

/// Accelerated projected gradient descent from alpha = delta = 0, z = 1.
/// Both the new iterate and the extrapolated point are clamped into the box.
/// Hitting max_iter is not an error (converged = false). Throws NumericError
/// carrying the 1-based iteration if the gradient becomes non-finite.
DualSolution agd_solve(const DualProblem& problem, const SolverOptions& options = {});

}  // namespace msvm
