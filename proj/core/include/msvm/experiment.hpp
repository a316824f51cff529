#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msvm/dataset.hpp"
#include "msvm/dual_solver.hpp"
#include "msvm/kernel.hpp"
#include "msvm/metrics.hpp"
#include "msvm/model.hpp"

namespace msvm {

enum class NormalizationMode {
  Global,   ///< min/max over the whole (subsampled) dataset before splitting
  PerFold,  ///< min/max over each training split, applied to its test split
};

enum class ReportFormat { Csv, Markdown };

const char* to_string(NormalizationMode mode);
const char* to_string(ReportFormat format);

/// Cross-validation run description. Defaults: c = 1, 10 folds, subsample 4000,
/// RBF width 0.7 for multiclass and 0.3 for multilabel datasets when gamma is unset.
struct ExperimentConfig {
  std::filesystem::path manifest;
  ModelKind model = ModelKind::MatrixSvm;
  KernelKind kernel = KernelKind::Rbf;
  std::optional<double> gamma;
  double c = 1.0;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  std::size_t subsample = 4000;
  SolverOptions solver;
  NormalizationMode normalization = NormalizationMode::Global;
  /// Fit with single-class training columns removed instead of failing; the
  /// dropped columns are scored with their constant training label.
  bool drop_degenerate = false;
  /// BR only: one Gram matrix for all columns (ablation timing).
  bool br_shared_gram = false;
  /// Run folds on worker threads. Timings are then not comparable.
  bool parallel_folds = false;
  /// One discarded fit before the timed folds.
  bool warmup = true;

  /// Throws ConfigError for folds < 2, gamma with a linear kernel, a
  /// non-positive gamma or c, ls with an RBF kernel, shared Gram without br,
  /// or invalid solver options.
  void validate() const;

  /// The kernel to use on a dataset of the given task, applying the default width.
  KernelSpec kernel_spec(TaskKind task) const;
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double fit_seconds = 0.0;
  MetricReport metrics;
  /// Argmax accuracy, multiclass datasets only.
  std::optional<double> argmax_accuracy;
  std::size_t solver_iterations = 0;
  bool converged = true;
  std::vector<std::size_t> dropped_columns;
  std::vector<std::string> warnings;
};

struct ColumnSummary {
  std::string name;
  double mean = 0.0;
  double sample_sd = 0.0;  ///< n - 1 denominator
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string dataset;
  TaskKind task = TaskKind::Multilabel;
  std::size_t samples = 0;  ///< after subsampling
  std::size_t features = 0;
  std::size_t labels = 0;
  KernelSpec kernel = KernelSpec::linear();
  std::vector<FoldResult> folds;

  /// Column names of the per-fold numeric table, in report order.
  std::vector<std::string> columns() const;
  /// Values of columns() for one fold.
  std::vector<double> row(const FoldResult& fold) const;
  /// Mean and sample standard deviation of every column across folds.
  std::vector<ColumnSummary> aggregate() const;
};

/// Loads the manifest's dataset and runs run_experiment on it.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Subsample (seed), normalise, split into folds (seed + 1), then fit and score
/// each fold. Errors thrown inside a fold keep their type and gain a "fold i:"
/// prefix. A fold whose every training column is single-class throws DataError.
ExperimentReport run_experiment(const ExperimentConfig& config, const Dataset& data);

/// CSV: header, one row per fold, then an `aggregate` row, four decimals. Every
/// numeric column is followed by a `<name>_sample_sd` column that is filled on
/// the aggregate row only. Markdown: a summary table with "mean±sd" cells and
/// a per-fold table.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

/// JSON with the config echo, dataset shape, per-fold diagnostics and build
/// environment. Written next to the report as `<out>.meta.json`.
std::string report_metadata_json(const ExperimentReport& report);

/// Writes emit_report to `out` and the metadata to `<out>.meta.json`.
/// Throws DataError if either file cannot be written.
void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::filesystem::path& out);

}  // namespace msvm
