#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "msvm/error.hpp"
#include "msvm/model_io.hpp"
#include "oracles.hpp"

using msvm::KernelSpec;

namespace {

msvm::TrainedModel round_trip(const msvm::TrainedModel& model) {
  std::stringstream buf;
  msvm::save_model(model, buf);
  return msvm::load_model(buf);
}

}  // namespace

TEST(ModelIoTest, KernelModelScoresAreBitIdentical) {
  std::mt19937_64 rng(50);
  const auto p = oracle::random_problem(25, 3, 3, rng);
  const auto model = msvm::fit_matrix_svm(p.x, p.y, KernelSpec::rbf(0.37), 1.5);
  const auto loaded = round_trip(model);
  EXPECT_EQ(loaded.kind, model.kind);
  EXPECT_EQ(loaded.kernel, model.kernel);
  EXPECT_EQ(loaded.c, model.c);
  EXPECT_EQ(loaded.solver_iterations, model.solver_iterations);
  EXPECT_EQ(loaded.x_train, model.x_train);
  EXPECT_EQ(loaded.coeff, model.coeff);
  const auto test = oracle::random_matrix(8, 3, rng);
  EXPECT_EQ(msvm::decision_scores(loaded, test), msvm::decision_scores(model, test));
}

TEST(ModelIoTest, BrAndLeastSquaresRoundTrip) {
  std::mt19937_64 rng(51);
  const auto p = oracle::random_problem(12, 2, 2, rng);
  msvm::BinaryRelevanceOptions shared;
  shared.share_gram = true;
  const auto br = msvm::fit_br_svm(p.x, p.y, KernelSpec::linear(), 1.0, {}, shared);
  const auto br2 = round_trip(br);
  EXPECT_EQ(br2.kind, msvm::ModelKind::BinaryRelevance);
  EXPECT_TRUE(br2.shared_gram);
  EXPECT_EQ(br2.coeff, br.coeff);

  const auto ls = msvm::fit_ls_matrix_svm(p.x, p.y, 0.7);
  const auto ls2 = round_trip(ls);
  EXPECT_EQ(ls2.kind, msvm::ModelKind::LeastSquares);
  EXPECT_EQ(ls2.weights, ls.weights);
  EXPECT_EQ(msvm::decision_scores(ls2, p.x), msvm::decision_scores(ls, p.x));
}

TEST(ModelIoTest, RejectsMalformedInput) {
  std::stringstream wrong_version("msvm-model 99\n");
  EXPECT_THROW(msvm::load_model(wrong_version), msvm::DataError);
  std::stringstream garbage("hello\n");
  EXPECT_THROW(msvm::load_model(garbage), msvm::DataError);

  std::mt19937_64 rng(52);
  const auto p = oracle::random_problem(6, 2, 1, rng);
  std::stringstream buf;
  msvm::save_model(msvm::fit_matrix_svm(p.x, p.y, KernelSpec::linear(), 1.0), buf);
  const std::string text = buf.str();
  std::stringstream truncated(text.substr(0, text.size() / 2));
  EXPECT_THROW(msvm::load_model(truncated), msvm::DataError);
}

TEST(ModelIoTest, MissingFile) {
  EXPECT_THROW(msvm::load_model(std::filesystem::path("/nonexistent/model.txt")), msvm::DataError);
}
