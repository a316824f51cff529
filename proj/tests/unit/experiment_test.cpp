#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "msvm/error.hpp"
#include "msvm/experiment.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using msvm::Matrix;

namespace {

msvm::Dataset blob_dataset(std::size_t per_class, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto b = oracle::gaussian_blobs(per_class, k, 3, 3.0, 0.5, rng);
  msvm::Dataset ds;
  ds.name = "blobs";
  ds.task = k > 2 ? msvm::TaskKind::Multiclass : msvm::TaskKind::Multilabel;
  ds.x = b.x;
  ds.y = k > 2 ? oracle::one_hot(b.classes, k) : oracle::one_hot(b.classes, 2).column(0);
  return ds;
}

msvm::ExperimentConfig linear_config(std::size_t folds) {
  msvm::ExperimentConfig cfg;
  cfg.kernel = msvm::KernelKind::Linear;
  cfg.folds = folds;
  cfg.warmup = false;
  return cfg;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

// Everything except the fit_seconds mean/sd columns.
std::string without_timings(const std::string& csv) {
  std::string out;
  for (auto& row : parse_csv(csv)) {
    row.erase(row.begin() + 1, row.begin() + 3);
    for (const auto& c : row) out += c + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST(ExperimentConfigTest, Validation) {
  msvm::ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.folds = 1;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
  cfg = {};
  cfg.kernel = msvm::KernelKind::Linear;
  cfg.gamma = 0.5;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
  cfg = {};
  cfg.gamma = -1.0;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
  cfg = {};
  cfg.model = msvm::ModelKind::LeastSquares;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
  cfg = {};
  cfg.br_shared_gram = true;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
  cfg = {};
  cfg.c = 0.0;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
  cfg = {};
  cfg.solver.tol = 0.0;
  EXPECT_THROW(cfg.validate(), msvm::ConfigError);
}

TEST(ExperimentConfigTest, DefaultWidthsFollowTask) {
  msvm::ExperimentConfig cfg;
  EXPECT_EQ(cfg.kernel_spec(msvm::TaskKind::Multiclass).gamma(), 0.7);
  EXPECT_EQ(cfg.kernel_spec(msvm::TaskKind::Multilabel).gamma(), 0.3);
  cfg.gamma = 2.0;
  EXPECT_EQ(cfg.kernel_spec(msvm::TaskKind::Multiclass).gamma(), 2.0);
  EXPECT_EQ(cfg.folds, 10u);
  EXPECT_EQ(cfg.c, 1.0);
  EXPECT_EQ(cfg.subsample, 4000u);
}

TEST(RunExperimentTest, TwoBlobsLinear) {
  const auto report = msvm::run_experiment(linear_config(5), blob_dataset(20, 2, 80));
  ASSERT_EQ(report.folds.size(), 5u);
  EXPECT_GE(report.aggregate()[1].mean, 0.95);  // exact_match
  EXPECT_EQ(report.samples, 40u);
}

TEST(RunExperimentTest, MulticlassAddsArgmaxColumn) {
  auto cfg = linear_config(3);
  cfg.kernel = msvm::KernelKind::Rbf;
  const auto report = msvm::run_experiment(cfg, blob_dataset(15, 3, 81));
  EXPECT_EQ(report.columns().back(), "argmax_accuracy");
  EXPECT_GE(report.aggregate().back().mean, 0.9);
  EXPECT_EQ(report.kernel.gamma(), 0.7);
}

TEST(RunExperimentTest, DeterministicApartFromTimings) {
  auto cfg = linear_config(4);
  cfg.warmup = true;
  const auto ds = blob_dataset(20, 3, 82);
  const auto a = msvm::emit_report(msvm::run_experiment(cfg, ds), msvm::ReportFormat::Csv);
  const auto b = msvm::emit_report(msvm::run_experiment(cfg, ds), msvm::ReportFormat::Csv);
  EXPECT_EQ(without_timings(a), without_timings(b));
}

TEST(RunExperimentTest, ParallelFoldsMatchSequentialMetrics) {
  auto cfg = linear_config(4);
  const auto ds = blob_dataset(20, 3, 83);
  const auto seq = msvm::run_experiment(cfg, ds);
  cfg.parallel_folds = true;
  const auto par = msvm::run_experiment(cfg, ds);
  EXPECT_EQ(without_timings(msvm::emit_report(seq, msvm::ReportFormat::Csv)),
            without_timings(msvm::emit_report(par, msvm::ReportFormat::Csv)));
}

TEST(RunExperimentTest, SubsampleAndPerFoldNormalization) {
  auto cfg = linear_config(3);
  cfg.subsample = 30;
  cfg.normalization = msvm::NormalizationMode::PerFold;
  const auto report = msvm::run_experiment(cfg, blob_dataset(20, 2, 84));
  EXPECT_EQ(report.samples, 30u);
  std::size_t tested = 0;
  for (const auto& f : report.folds) tested += f.test_size;
  EXPECT_EQ(tested, 30u);
}

TEST(RunExperimentTest, DegenerateColumnsFailOrDrop) {
  auto ds = blob_dataset(10, 2, 85);
  Matrix y(ds.x.rows(), 2, -1.0);
  for (std::size_t i = 0; i < ds.x.rows(); ++i) y(i, 0) = ds.y(i, 0);
  y(0, 1) = 1.0;  // a single positive: some training splits lack it
  ds.y = msvm::LabelMatrix(y);

  auto cfg = linear_config(4);
  try {
    msvm::run_experiment(cfg, ds);
    FAIL();
  } catch (const msvm::DegenerateLabelError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("fold ", 0), 0u) << e.what();
  }

  cfg.drop_degenerate = true;
  const auto report = msvm::run_experiment(cfg, ds);
  std::size_t dropped = 0;
  for (const auto& f : report.folds) dropped += f.dropped_columns.size();
  EXPECT_EQ(dropped, 1u);

  Matrix all_neg(ds.x.rows(), 1, -1.0);
  ds.y = msvm::LabelMatrix(all_neg);
  EXPECT_THROW(msvm::run_experiment(cfg, ds), msvm::DataError);
}

TEST(RunExperimentTest, LeastSquaresAndBr) {
  auto cfg = linear_config(3);
  cfg.model = msvm::ModelKind::LeastSquares;
  EXPECT_GE(msvm::run_experiment(cfg, blob_dataset(15, 3, 86)).aggregate()[1].mean, 0.8);
  cfg.model = msvm::ModelKind::BinaryRelevance;
  cfg.br_shared_gram = true;
  EXPECT_GE(msvm::run_experiment(cfg, blob_dataset(15, 3, 86)).aggregate()[1].mean, 0.8);
}

TEST(RunExperimentTest, TooManyFolds) {
  EXPECT_THROW(msvm::run_experiment(linear_config(50), blob_dataset(10, 2, 87)), msvm::ConfigError);
}

namespace {

msvm::ExperimentReport two_fold_report() {
  msvm::ExperimentReport r;
  r.dataset = "toy";
  r.task = msvm::TaskKind::Multilabel;
  r.samples = 4;
  r.features = 1;
  r.labels = 1;
  r.config.folds = 2;
  for (std::size_t f = 0; f < 2; ++f) {
    msvm::FoldResult fr;
    fr.fold = f;
    fr.fit_seconds = 0.5;
    fr.metrics.exact_match = f == 0 ? 0.1 : 0.3;
    fr.metrics.hamming_loss = 0.123456;
    r.folds.push_back(fr);
  }
  r.folds[1].dropped_columns = {2, 5};
  return r;
}

}  // namespace

TEST(EmitReportTest, CsvShapeAndAggregate) {
  const auto csv = msvm::emit_report(two_fold_report(), msvm::ReportFormat::Csv);
  const auto rows = parse_csv(csv);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][0], "fold");
  EXPECT_EQ(rows[0][3], "exact_match");
  EXPECT_EQ(rows[0][4], "exact_match_sample_sd");
  EXPECT_EQ(rows[0].back(), "dropped_columns");
  EXPECT_EQ(rows[3][0], "aggregate");
  EXPECT_EQ(rows[3][3], "0.2000");
  EXPECT_EQ(rows[3][4], "0.1414");
  EXPECT_EQ(rows[2].back(), "2;5");
  for (const auto& r : rows) EXPECT_EQ(r.size(), rows[0].size());
}

TEST(EmitReportTest, CsvRoundTripsToFourDecimals) {
  const auto report = two_fold_report();
  const auto rows = parse_csv(msvm::emit_report(report, msvm::ReportFormat::Csv));
  for (std::size_t f = 0; f < 2; ++f) {
    const auto values = report.row(report.folds[f]);
    for (std::size_t c = 0; c < values.size(); ++c) {
      EXPECT_NEAR(std::stod(rows[f + 1][1 + 2 * c]), values[c], 5e-5);
    }
  }
}

TEST(EmitReportTest, MarkdownUsesMeanPlusMinusSd) {
  const auto md = msvm::emit_report(two_fold_report(), msvm::ReportFormat::Markdown);
  EXPECT_NE(md.find("| ExactMatch | 0.2000±0.1414 |"), std::string::npos) << md;
  EXPECT_NE(md.find("sample (n-1)"), std::string::npos);
}

TEST(WriteReportTest, WritesReportAndMetadata) {
  const fs::path dir = fs::path(::testing::TempDir()) / "msvm_write_report";
  fs::create_directories(dir);
  const auto out = dir / "r.csv";
  msvm::write_report(two_fold_report(), msvm::ReportFormat::Csv, out);
  EXPECT_TRUE(fs::exists(out));
  std::ifstream meta(dir / "r.csv.meta.json");
  std::stringstream text;
  text << meta.rdbuf();
  EXPECT_NE(text.str().find("\"std_convention\""), std::string::npos);
  EXPECT_NE(text.str().find("\"dropped_columns\""), std::string::npos);
  fs::remove_all(dir);

  EXPECT_THROW(msvm::write_report(two_fold_report(), msvm::ReportFormat::Csv,
                                  "/nonexistent/dir/r.csv"),
               msvm::DataError);
}
