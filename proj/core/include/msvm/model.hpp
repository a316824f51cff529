#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "msvm/dual_solver.hpp"
#include "msvm/kernel.hpp"
#include "msvm/labels.hpp"
#include "msvm/matrix.hpp"

namespace msvm {

enum class ModelKind {
  MatrixSvm,        ///< one dual over all label columns
  BinaryRelevance,  ///< one dual per label column
  LeastSquares,     ///< closed-form linear ridge on the augmented design
};

const char* to_string(ModelKind kind);

/// A fitted classifier. Kernel models keep the training features and the
/// coefficient matrix alpha o Y; scores are Kbar(x_test, x_train) * coeff.
/// The least-squares model keeps only the (d+1) x m weight matrix.
struct TrainedModel {
  ModelKind kind = ModelKind::MatrixSvm;
  KernelSpec kernel = KernelSpec::linear();
  Matrix x_train;  ///< n x d raw features (kernel models)
  Matrix coeff;    ///< n x m, entries in [-c, c] (kernel models)
  Matrix weights;  ///< (d+1) x m, last row is the bias (least squares)
  double c = 1.0;
  double fit_seconds = 0.0;
  std::size_t solver_iterations = 0;  ///< summed over sub-problems for BR
  bool converged = true;
  /// Set when BR shared one Gram matrix across columns (ablation timing).
  bool shared_gram = false;
  std::vector<std::string> warnings;

  std::size_t labels() const noexcept;
  std::size_t features() const noexcept;
};

struct BinaryRelevanceOptions {
  /// Build Kbar once and reuse it for every column instead of per column.
  bool share_gram = false;
  /// Solve columns on separate threads; only allowed with share_gram.
  bool parallel_columns = false;
};

/// Builds Kbar once and solves the single n x m dual. fit_seconds covers the
/// Gram construction and the solve. Throws DegenerateLabelError for a label
/// column with one class.
TrainedModel fit_matrix_svm(const Matrix& x, const LabelMatrix& y, const KernelSpec& kernel,
                            double c, const SolverOptions& options = {});

/// Solves m independent n x 1 duals, rebuilding Kbar for each unless
/// share_gram is set. fit_seconds is the sum over the column fits.
TrainedModel fit_br_svm(const Matrix& x, const LabelMatrix& y, const KernelSpec& kernel, double c,
                        const SolverOptions& options = {},
                        const BinaryRelevanceOptions& br = {});

/// W = (X'^T X' + I / (2c))^-1 X'^T Y with X' = [x, 1]. Minimises
/// 1/2 Tr(W^T W) + c |Y - X'W|_F^2. A condition estimate above 1e12 adds a
/// warning to the model.
TrainedModel fit_ls_matrix_svm(const Matrix& x, const LabelMatrix& y, double c);

/// Real-valued scores, n_test x m.
Matrix decision_scores(const TrainedModel& model, const Matrix& x_test);

/// +1 where the score is >= 0 (ties go positive), -1 elsewhere.
LabelMatrix predict_multilabel(const Matrix& scores);

struct MulticlassPrediction {
  std::vector<std::size_t> classes;  ///< 0-based argmax per row
  LabelMatrix one_hot;               ///< +1 at the argmax, -1 elsewhere
};

/// Row-wise argmax, ties to the lowest index. Requires m >= 2.
MulticlassPrediction predict_multiclass(const Matrix& scores);

struct PrimalDiagnostics {
  double primal_objective = 0.0;
  double dual_objective = 0.0;  ///< value of the minimised dual at alpha
  Matrix slack;                 ///< Q = max(0, E - Y o Z_train)
  double duality_gap = 0.0;     ///< primal - (-dual_objective)
};

/// Primal objective 1/2 Tr(W^T W) + c sum(Q) of a hinge model on its training
/// data, with Tr(W^T W) = Tr(coeff^T Kbar coeff).
PrimalDiagnostics primal_diagnostics(const TrainedModel& model, const Matrix& x,
                                     const LabelMatrix& y);

/// Complementary-slackness check. For alpha = 0 the margin y.z must be at
/// least 1, for 0 < alpha < c it must equal 1, for alpha = c at most 1; a
/// violation is a miss by more than kkt_tol.
struct KktReport {
  std::size_t total = 0;
  std::size_t at_zero = 0;
  std::size_t interior = 0;
  std::size_t at_upper = 0;
  std::size_t zero_violations = 0;
  std::size_t interior_violations = 0;
  std::size_t upper_violations = 0;
  double max_violation = 0.0;
  /// beta = cE - alpha, the multipliers of the slack constraint Q >= 0.
  Matrix beta;

  std::size_t violations() const noexcept {
    return zero_violations + interior_violations + upper_violations;
  }
  double violation_fraction() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(violations()) / static_cast<double>(total);
  }
};

KktReport kkt_report(const TrainedModel& model, const Matrix& x, const LabelMatrix& y,
                     double kkt_tol);

/// Drops training rows whose coefficients are all zero. Scores are unchanged
/// up to summation order.
TrainedModel prune_support_vectors(const TrainedModel& model);

struct SpdSolve {
  Matrix solution;
  /// (max L_ii / min L_ii)^2 from the Cholesky factor, a lower bound on cond(A).
  double condition_estimate = 1.0;
};

/// Solves A X = B for symmetric positive-definite A by Cholesky factorisation.
/// Throws NumericError if A is not numerically positive definite.
SpdSolve solve_spd(const Matrix& a, const Matrix& b);

}  // namespace msvm
