#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "msvm/error.hpp"
#include "msvm/model.hpp"
#include "oracles.hpp"

using msvm::KernelSpec;
using msvm::LabelMatrix;
using msvm::Matrix;

namespace {

const Matrix kTwoX{{1}, {-1}};
const LabelMatrix kTwoY(Matrix{{1}, {-1}});

msvm::SolverOptions tight() {
  msvm::SolverOptions o;
  o.tol = 1e-7;
  o.max_iter = 100000;
  return o;
}

}  // namespace

TEST(FitMatrixSvmTest, TwoPointCoefficients) {
  const auto model = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 1.0);
  EXPECT_NEAR(model.coeff(0, 0), 0.5, 1e-4);
  EXPECT_NEAR(model.coeff(1, 0), -0.5, 1e-4);
  const auto precise = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 1.0, tight());
  EXPECT_NEAR(precise.coeff(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(precise.coeff(1, 0), -0.5, 1e-6);
  EXPECT_EQ(model.kind, msvm::ModelKind::MatrixSvm);
  EXPECT_GE(model.fit_seconds, 0.0);
  EXPECT_TRUE(model.converged);
}

TEST(FitMatrixSvmTest, DuplicatedColumnsGiveIdenticalCoefficients) {
  const LabelMatrix y(Matrix{{1, 1}, {-1, -1}});
  const auto model = msvm::fit_matrix_svm(kTwoX, y, KernelSpec::linear(), 1.0);
  EXPECT_NEAR(model.coeff(0, 0), model.coeff(0, 1), 1e-6);
  EXPECT_NEAR(model.coeff(1, 0), model.coeff(1, 1), 1e-6);
}

TEST(FitMatrixSvmTest, SeparatesTwoBlobs) {
  std::mt19937_64 rng(30);
  const auto blobs = oracle::gaussian_blobs(15, 2, 2, 2.0, 0.5, rng);
  const auto y = oracle::one_hot(blobs.classes, 2).column(0);
  const auto model = msvm::fit_matrix_svm(blobs.x, y, KernelSpec::rbf(0.3), 1.0);
  const auto pred = msvm::predict_multilabel(msvm::decision_scores(model, blobs.x));

  // Nearest-centroid classifier as an independent sanity reference.
  std::size_t hits = 0;
  std::size_t centroid_hits = 0;
  std::vector<double> c0(2, 0.0), c1(2, 0.0);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t t = 0; t < 2; ++t) (blobs.classes[i] == 0 ? c0 : c1)[t] += blobs.x(i, t) / 15.0;
  for (std::size_t i = 0; i < 30; ++i) {
    hits += pred(i, 0) == y(i, 0);
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t t = 0; t < 2; ++t) {
      d0 += std::pow(blobs.x(i, t) - c0[t], 2);
      d1 += std::pow(blobs.x(i, t) - c1[t], 2);
    }
    centroid_hits += (d0 < d1 ? 1 : -1) == y(i, 0);
  }
  EXPECT_GE(hits / 30.0, 0.95);
  EXPECT_GE(centroid_hits / 30.0, 0.95);
}

TEST(FitMatrixSvmTest, DegenerateColumnIsNamed) {
  const LabelMatrix y(Matrix{{1, 1}, {-1, 1}});
  try {
    msvm::fit_matrix_svm(kTwoX, y, KernelSpec::linear(), 1.0);
    FAIL();
  } catch (const msvm::DegenerateLabelError& e) {
    EXPECT_EQ(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("column 1"), std::string::npos);
  }
  EXPECT_THROW(msvm::fit_br_svm(kTwoX, y, KernelSpec::linear(), 1.0), msvm::DegenerateLabelError);
}

TEST(FitMatrixSvmTest, RejectsBadInputs) {
  EXPECT_THROW(msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 0.0), msvm::ParameterError);
  EXPECT_THROW(msvm::fit_matrix_svm(Matrix(3, 1), kTwoY, KernelSpec::linear(), 1.0),
               msvm::DimensionError);
}

TEST(FitBrSvmTest, SingleColumnIsBitwiseIdentical) {
  std::mt19937_64 rng(31);
  const auto p = oracle::random_problem(20, 3, 1, rng);
  const auto a = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0);
  const auto b = msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0);
  EXPECT_EQ(a.coeff, b.coeff);
  EXPECT_EQ(a.solver_iterations, b.solver_iterations);
}

TEST(FitBrSvmTest, AgreesWithMatrixSvm) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = oracle::random_problem(20 + 6 * trial, 8, 3, rng);
    const auto a = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(1.0), 1.0, tight());
    const auto b = msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(1.0), 1.0, tight());
    EXPECT_LE(msvm::max_abs_difference(a.coeff, b.coeff), 1e-4);
  }
}

TEST(FitBrSvmTest, PinnedIterationsAreBitwiseIdentical) {
  std::mt19937_64 rng(33);
  const auto p = oracle::random_problem(30, 3, 4, rng);
  msvm::SolverOptions pinned;
  pinned.tol = 1e-300;
  pinned.max_iter = 200;
  const auto a = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(0.8), 1.0, pinned);
  const auto b = msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(0.8), 1.0, pinned);
  EXPECT_EQ(a.coeff, b.coeff);
  EXPECT_EQ(b.solver_iterations, 4 * a.solver_iterations);
}

TEST(FitBrSvmTest, SharedGramModes) {
  std::mt19937_64 rng(33);
  const auto p = oracle::random_problem(25, 3, 4, rng);
  const auto plain = msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0);
  msvm::BinaryRelevanceOptions shared;
  shared.share_gram = true;
  const auto s = msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0, {}, shared);
  shared.parallel_columns = true;
  const auto par = msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0, {}, shared);
  EXPECT_EQ(plain.coeff, s.coeff);
  EXPECT_EQ(plain.coeff, par.coeff);
  EXPECT_TRUE(s.shared_gram);
  EXPECT_FALSE(plain.shared_gram);

  msvm::BinaryRelevanceOptions bad;
  bad.parallel_columns = true;
  EXPECT_THROW(msvm::fit_br_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0, {}, bad),
               msvm::ParameterError);
}

TEST(FitLsTest, MatchesGradientDescentOracle) {
  std::mt19937_64 rng(34);
  const auto x = oracle::random_matrix(10, 3, rng);
  const auto y = oracle::random_labels(10, 2, rng);
  const auto model = msvm::fit_ls_matrix_svm(x, y, 1.0);
  const auto ref = oracle::ls_gradient_descent(oracle::to_dense(x), oracle::to_dense(y.values()),
                                               1.0, 200000);
  const auto w = oracle::to_dense(model.weights);
  double diff = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w[i].size(); ++j) diff += std::pow(w[i][j] - ref[i][j], 2);
  EXPECT_LE(std::sqrt(diff) / oracle::frob(ref), 1e-5);
}

TEST(FitLsTest, RegularisationLimits) {
  // Square augmented design: three points in 2-D plus the bias column.
  const Matrix x{{1, 0}, {0, 1}, {0, 0}};
  const LabelMatrix y(Matrix{{1, -1}, {-1, 1}, {1, 1}});
  const auto loose = msvm::fit_ls_matrix_svm(x, y, 1e8);
  const auto resid = msvm::subtract(y.values(), msvm::decision_scores(loose, x));
  EXPECT_LE(msvm::frobenius_norm(resid), 1e-3);

  const auto tight_model = msvm::fit_ls_matrix_svm(x, y, 1e-8);
  EXPECT_LE(msvm::frobenius_norm(tight_model.weights), 1e-3);
}

TEST(FitLsTest, WarnsWhenIllConditioned) {
  const Matrix x{{1e7}, {-1e7}, {1e7}};
  const LabelMatrix y(Matrix{{1}, {-1}, {1}});
  const auto model = msvm::fit_ls_matrix_svm(x, y, 1e6);
  EXPECT_FALSE(model.warnings.empty());
}

TEST(SolveSpdTest, RejectsIndefinite) {
  EXPECT_THROW(msvm::solve_spd(Matrix{{1, 2}, {2, 1}}, Matrix{{1}, {1}}), msvm::NumericError);
  const auto s = msvm::solve_spd(Matrix{{4, 2}, {2, 3}}, Matrix{{2}, {1}});
  EXPECT_NEAR(s.solution(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(s.solution(1, 0), 0.0, 1e-14);
}

TEST(DecisionScoresTest, Examples) {
  const auto model = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 1.0);
  EXPECT_NEAR(msvm::decision_scores(model, Matrix{{2}})(0, 0), 2.0, 1e-4);

  auto zero = model;
  zero.coeff = Matrix::zeros(2, 1);
  EXPECT_EQ(msvm::decision_scores(zero, Matrix{{2}, {-3}}), Matrix::zeros(2, 1));
  EXPECT_THROW(msvm::decision_scores(model, Matrix(1, 2)), msvm::DimensionError);
}

TEST(DecisionScoresTest, InteriorTrainingPointScoresItsLabel) {
  std::mt19937_64 rng(35);
  const auto p = oracle::random_problem(30, 3, 2, rng);
  const auto model = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(1.0), 1.0, tight());
  const auto z = msvm::decision_scores(model, p.x);
  std::size_t interior = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double alpha = model.coeff(i, j) * p.y(i, j);
      if (alpha > 1e-3 && alpha < 1.0 - 1e-3) {
        ++interior;
        EXPECT_NEAR(z(i, j), p.y(i, j), 1e-2);
      }
    }
  }
  EXPECT_GT(interior, 0u);
}

TEST(DecisionScoresTest, LinearPrimalIdentity) {
  std::mt19937_64 rng(36);
  const auto p = oracle::random_problem(15, 4, 2, rng);
  const auto model = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::linear(), 1.0);
  const auto xa = msvm::append_ones_column(p.x);
  const auto w = msvm::multiply(msvm::transpose(xa), model.coeff);
  EXPECT_LE(msvm::max_abs_difference(msvm::decision_scores(model, p.x), msvm::multiply(xa, w)),
            1e-8);
}

TEST(PredictTest, Multilabel) {
  EXPECT_EQ(msvm::predict_multilabel(Matrix{{2, -1}}).values(), (Matrix{{1, -1}}));
  EXPECT_EQ(msvm::predict_multilabel(Matrix{{0}}).values(), (Matrix{{1}}));
  EXPECT_EQ(msvm::predict_multilabel(Matrix{{-1, -0.1}}).values(), (Matrix{{-1, -1}}));
}

TEST(PredictTest, Multiclass) {
  const auto a = msvm::predict_multiclass(Matrix{{0.1, 0.9, 0.3}});
  EXPECT_EQ(a.classes[0], 1u);  // 0-based
  EXPECT_EQ(a.one_hot.values(), (Matrix{{-1, 1, -1}}));
  EXPECT_EQ(msvm::predict_multiclass(Matrix{{0.5, 0.5}}).classes[0], 0u);
  EXPECT_THROW(msvm::predict_multiclass(Matrix{{1}}), msvm::DimensionError);
}

TEST(PredictTest, ScalingInvariance) {
  std::mt19937_64 rng(37);
  const auto z = oracle::random_matrix(20, 4, rng);
  const auto scaled = msvm::scale(z, 3.7);
  EXPECT_EQ(msvm::predict_multilabel(z), msvm::predict_multilabel(scaled));
  EXPECT_EQ(msvm::predict_multiclass(z).classes, msvm::predict_multiclass(scaled).classes);
}

TEST(PredictTest, ArgmaxAgreesWithSignWhenOnePositive) {
  std::mt19937_64 rng(38);
  const auto blobs = oracle::gaussian_blobs(20, 3, 3, 3.0, 0.6, rng);
  const auto y = oracle::one_hot(blobs.classes, 3);
  const auto model = msvm::fit_matrix_svm(blobs.x, y, KernelSpec::rbf(0.7), 1.0);
  const auto z = msvm::decision_scores(model, blobs.x);
  const auto signs = msvm::predict_multilabel(z);
  const auto argmax = msvm::predict_multiclass(z);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    std::size_t positives = 0;
    std::size_t which = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (signs.positive(i, j)) {
        ++positives;
        which = j;
      }
    }
    if (positives != 1) continue;
    ++checked;
    EXPECT_EQ(argmax.classes[i], which);
  }
  EXPECT_GT(checked, 30u);
}

TEST(PrimalDiagnosticsTest, TwoPointOptimum) {
  const auto model = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 1.0, tight());
  const auto d = msvm::primal_diagnostics(model, kTwoX, kTwoY);
  EXPECT_LE(msvm::frobenius_norm(d.slack), 1e-6);
  EXPECT_LE(std::abs(d.duality_gap), 1e-4);
}

TEST(PrimalDiagnosticsTest, ZeroCoefficients) {
  auto model = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 2.0);
  model.coeff = Matrix::zeros(2, 1);
  const auto d = msvm::primal_diagnostics(model, kTwoX, kTwoY);
  EXPECT_EQ(d.slack, Matrix::ones(2, 1));
  EXPECT_DOUBLE_EQ(d.primal_objective, 2.0 * 2 * 1);
}

TEST(PrimalDiagnosticsTest, GapShrinksWithTolerance) {
  std::mt19937_64 rng(39);
  const auto p = oracle::random_problem(25, 3, 2, rng);
  double previous = 1e300;
  for (double tol : {1e-3, 1e-6, 1e-9}) {
    msvm::SolverOptions o;
    o.tol = tol;
    o.max_iter = 200000;
    const auto model = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(1.0), 1.0, o);
    const auto d = msvm::primal_diagnostics(model, p.x, p.y);
    EXPECT_GE(d.duality_gap, -1e-6);
    for (double q : d.slack.values()) EXPECT_GE(q, 0.0);
    EXPECT_LE(d.duality_gap, previous + 1e-9);
    previous = d.duality_gap;
  }
  EXPECT_LE(previous, 1e-4);
}

TEST(PrimalDiagnosticsTest, RejectsLeastSquaresModel) {
  const auto ls = msvm::fit_ls_matrix_svm(kTwoX, kTwoY, 1.0);
  EXPECT_THROW(msvm::primal_diagnostics(ls, kTwoX, kTwoY), msvm::ParameterError);
}

TEST(KktTest, TwoPointOptimumHasNoViolations) {
  const auto model = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 1.0, tight());
  const auto r = msvm::kkt_report(model, kTwoX, kTwoY, 1e-2);
  EXPECT_EQ(r.violations(), 0u);
  EXPECT_EQ(r.total, 2u);
  EXPECT_NEAR(r.beta(0, 0), 0.5, 1e-5);
}

TEST(KktTest, ZeroAlphaIsFlagged) {
  auto model = msvm::fit_matrix_svm(kTwoX, kTwoY, KernelSpec::linear(), 1.0);
  model.coeff = Matrix::zeros(2, 1);
  const auto r = msvm::kkt_report(model, kTwoX, kTwoY, 1e-2);
  EXPECT_EQ(r.zero_violations, 2u);
  EXPECT_NEAR(r.max_violation, 1.0, 1e-12);
}

TEST(KktTest, ConvergedRandomInstance) {
  std::mt19937_64 rng(40);
  const auto p = oracle::random_problem(30, 3, 2, rng);
  const auto model = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(1.0), 1.0, tight());
  const auto r = msvm::kkt_report(model, p.x, p.y, 1e-2);
  EXPECT_EQ(r.total, 60u);
  EXPECT_EQ(r.at_zero + r.interior + r.at_upper, r.total);
  EXPECT_LE(r.violation_fraction(), 0.05);
}

TEST(PruneTest, KeepsScores) {
  std::mt19937_64 rng(41);
  const auto p = oracle::random_problem(40, 2, 2, rng);
  const auto model = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(0.5), 1.0, tight());
  const auto pruned = msvm::prune_support_vectors(model);
  EXPECT_LT(pruned.x_train.rows(), model.x_train.rows());
  const auto test = oracle::random_matrix(10, 2, rng);
  EXPECT_LE(msvm::max_abs_difference(msvm::decision_scores(model, test),
                                     msvm::decision_scores(pruned, test)),
            1e-10);
}
