#include "msvm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "msvm/error.hpp"

namespace msvm {

namespace {

constexpr double kMulticlassGamma = 0.7;
constexpr double kMultilabelGamma = 0.3;

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Rethrows the active exception with a fold prefix, keeping its type.
[[noreturn]] void rethrow_for_fold(std::size_t fold) {
  const std::string prefix = "fold " + std::to_string(fold) + ": ";
  try {
    throw;
  } catch (const DegenerateLabelError& e) {
    throw DegenerateLabelError(prefix + e.what(), e.column());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what(), e.iteration());
  } catch (const DimensionError& e) {
    throw DimensionError(prefix + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const UndefinedMetricError& e) {
    throw UndefinedMetricError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

TrainedModel fit(const ExperimentConfig& config, const Matrix& x, const LabelMatrix& y,
                 const KernelSpec& kernel) {
  switch (config.model) {
    case ModelKind::MatrixSvm:
      return fit_matrix_svm(x, y, kernel, config.c, config.solver);
    case ModelKind::BinaryRelevance: {
      BinaryRelevanceOptions br;
      br.share_gram = config.br_shared_gram;
      return fit_br_svm(x, y, kernel, config.c, config.solver, br);
    }
    case ModelKind::LeastSquares:
      return fit_ls_matrix_svm(x, y, config.c);
  }
  throw ConfigError("unknown model kind");
}

std::size_t true_class(const LabelMatrix& y, std::size_t i) {
  for (std::size_t j = 0; j < y.cols(); ++j) {
    if (y.positive(i, j)) return j;
  }
  return y.cols();
}

struct PreparedData {
  Matrix x;
  LabelMatrix y;
};

FoldResult run_fold(const ExperimentConfig& config, const ExperimentReport& report,
                    const PreparedData& data, const Fold& split, std::size_t fold_id) {
  FoldResult result;
  result.fold = fold_id;
  result.train_size = split.train.size();
  result.test_size = split.test.size();

  Matrix x_train = select_rows(data.x, split.train);
  Matrix x_test = select_rows(data.x, split.test);
  if (config.normalization == NormalizationMode::PerFold) {
    const auto scaler = FeatureScaler::fit(x_train);
    x_train = scaler.apply(x_train);
    x_test = scaler.apply(x_test);
  }
  const LabelMatrix y_train = select_rows(data.y, split.train);
  const LabelMatrix y_test = select_rows(data.y, split.test);
  const std::size_t m = y_train.cols();

  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < m; ++j) {
    if (!config.drop_degenerate || y_train.column_has_both_classes(j)) {
      kept.push_back(j);
    } else {
      result.dropped_columns.push_back(j);
    }
  }
  if (kept.empty()) {
    throw DataError("every label column of the training split has a single class");
  }

  const LabelMatrix y_fit = kept.size() == m ? y_train : select_cols(y_train, kept);
  const TrainedModel model = fit(config, x_train, y_fit, report.kernel);
  result.fit_seconds = model.fit_seconds;
  result.solver_iterations = model.solver_iterations;
  result.converged = model.converged;
  result.warnings = model.warnings;

  const Matrix kept_scores = decision_scores(model, x_test);
  Matrix scores(x_test.rows(), m, 0.0);
  for (std::size_t q = 0; q < kept.size(); ++q) {
    for (std::size_t i = 0; i < scores.rows(); ++i) scores(i, kept[q]) = kept_scores(i, q);
  }
  for (const std::size_t j : result.dropped_columns) {
    const double constant = y_train(0, j);
    for (std::size_t i = 0; i < scores.rows(); ++i) scores(i, j) = constant;
  }

  const LabelMatrix predicted = predict_multilabel(scores);
  result.metrics = evaluate(y_test, predicted, scores);
  if (report.task == TaskKind::Multiclass && m >= 2) {
    const auto mc = predict_multiclass(scores);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_test.rows(); ++i) hits += mc.classes[i] == true_class(y_test, i);
    result.argmax_accuracy = static_cast<double>(hits) / static_cast<double>(y_test.rows());
  }
  return result;
}

}  // namespace

const char* to_string(NormalizationMode mode) {
  return mode == NormalizationMode::Global ? "global" : "per-fold";
}

const char* to_string(ReportFormat format) { return format == ReportFormat::Csv ? "csv" : "md"; }

void ExperimentConfig::validate() const {
  if (folds < 2) throw ConfigError("folds must be at least 2");
  if (subsample < 1) throw ConfigError("subsample must be at least 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("c must be a positive finite number");
  if (kernel == KernelKind::Linear && gamma) {
    throw ConfigError("gamma is only meaningful for the rbf kernel");
  }
  if (gamma && (!(*gamma > 0.0) || !std::isfinite(*gamma))) {
    throw ConfigError("gamma must be a positive finite number");
  }
  if (model == ModelKind::LeastSquares && kernel != KernelKind::Linear) {
    throw ConfigError("the ls model is linear only; use --kernel linear");
  }
  if (br_shared_gram && model != ModelKind::BinaryRelevance) {
    throw ConfigError("shared Gram mode applies to the br model only");
  }
  try {
    solver.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

KernelSpec ExperimentConfig::kernel_spec(TaskKind task) const {
  if (kernel == KernelKind::Linear) return KernelSpec::linear();
  if (gamma) return KernelSpec::rbf(*gamma);
  return KernelSpec::rbf(task == TaskKind::Multiclass ? kMulticlassGamma : kMultilabelGamma);
}

std::vector<std::string> ExperimentReport::columns() const {
  std::vector<std::string> cols = {"fit_seconds", "exact_match", "hamming_loss",
                                   "macro_f1",    "micro_f1",    "avg_precision"};
  if (task == TaskKind::Multiclass) cols.push_back("argmax_accuracy");
  return cols;
}

std::vector<double> ExperimentReport::row(const FoldResult& fold) const {
  std::vector<double> values = {fold.fit_seconds,      fold.metrics.exact_match,
                                fold.metrics.hamming_loss, fold.metrics.macro_f1,
                                fold.metrics.micro_f1,     fold.metrics.avg_precision};
  if (task == TaskKind::Multiclass) values.push_back(fold.argmax_accuracy.value_or(0.0));
  return values;
}

std::vector<ColumnSummary> ExperimentReport::aggregate() const {
  const auto names = columns();
  std::vector<ColumnSummary> out(names.size());
  const double n = static_cast<double>(folds.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    out[c].name = names[c];
    if (folds.empty()) continue;
    double sum = 0.0;
    for (const auto& f : folds) sum += row(f)[c];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& f : folds) ss += (row(f)[c] - mean) * (row(f)[c] - mean);
    out[c].mean = mean;
    out[c].sample_sd = folds.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Dataset data = load_dataset(read_manifest(config.manifest));
  return run_experiment(config, data);
}

ExperimentReport run_experiment(const ExperimentConfig& config, const Dataset& data) {
  config.validate();
  if (data.x.rows() != data.y.rows()) {
    throw DataError("dataset has " + std::to_string(data.x.rows()) + " feature rows and " +
                    std::to_string(data.y.rows()) + " label rows");
  }

  ExperimentReport report;
  report.config = config;
  report.dataset = data.name;
  report.task = data.task;
  report.kernel = config.kernel_spec(data.task);

  const auto picked = subsample(data.x.rows(), config.subsample, config.seed);
  PreparedData prepared{select_rows(data.x, picked), select_rows(data.y, picked)};
  if (config.normalization == NormalizationMode::Global) {
    prepared.x = normalize_features(prepared.x);
  }
  report.samples = prepared.x.rows();
  report.features = prepared.x.cols();
  report.labels = prepared.y.cols();

  if (config.folds > report.samples) {
    throw ConfigError("folds (" + std::to_string(config.folds) + ") exceeds sample count (" +
                      std::to_string(report.samples) + ")");
  }
  const auto splits = kfold_split(report.samples, config.folds, config.seed + 1);

  if (config.warmup) {
    try {
      (void)run_fold(config, report, prepared, splits.front(), 0);
    } catch (...) {
      rethrow_for_fold(0);
    }
  }

  report.folds.resize(splits.size());
  if (!config.parallel_folds) {
    for (std::size_t f = 0; f < splits.size(); ++f) {
      try {
        report.folds[f] = run_fold(config, report, prepared, splits[f], f);
      } catch (...) {
        rethrow_for_fold(f);
      }
    }
    return report;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_fold = splits.size();
  const std::size_t workers =
      std::min<std::size_t>(splits.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t f = next++; f < splits.size(); f = next++) {
        try {
          report.folds[f] = run_fold(config, report, prepared, splits[f], f);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (f < first_error_fold) {
            first_error_fold = f;
            try {
              rethrow_for_fold(f);
            } catch (...) {
              first_error = std::current_exception();
            }
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return report;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  const auto names = report.columns();
  const auto agg = report.aggregate();
  std::ostringstream out;

  auto dropped = [](const FoldResult& f) {
    std::string s;
    for (std::size_t i = 0; i < f.dropped_columns.size(); ++i) {
      if (i) s += ';';
      s += std::to_string(f.dropped_columns[i]);
    }
    return s;
  };

  if (format == ReportFormat::Csv) {
    out << "fold";
    for (const auto& n : names) out << ',' << n << ',' << n << "_sample_sd";
    out << ",dropped_columns\n";
    for (const auto& f : report.folds) {
      out << f.fold;
      for (const double v : report.row(f)) out << ',' << fixed4(v) << ',';
      out << ',' << dropped(f) << '\n';
    }
    out << "aggregate";
    for (const auto& a : agg) out << ',' << fixed4(a.mean) << ',' << fixed4(a.sample_sd);
    out << ",\n";
    return out.str();
  }

  static const char* const kTitles[] = {"Training time (s)", "ExactMatch", "HammingLoss",
                                        "MacroF1",           "MicroF1",    "AvgPrecision",
                                        "Argmax accuracy"};
  std::string method = std::string(to_string(report.config.model)) + ", " +
                       report.kernel.describe() + ", c=" + fixed4(report.config.c);
  out << "## " << report.dataset << " (" << report.samples << " x " << report.features << " x "
      << report.labels << ", " << report.folds.size() << "-fold)\n\n";
  out << "| Metric | " << method << " |\n|---|---|\n";
  for (std::size_t c = 0; c < agg.size(); ++c) {
    out << "| " << kTitles[c] << " | " << fixed4(agg[c].mean) << "±" << fixed4(agg[c].sample_sd)
        << " |\n";
  }
  out << "\nmean±sd over folds, sample (n-1) standard deviation; normalization "
      << to_string(report.config.normalization) << "; folds run "
      << (report.config.parallel_folds ? "in parallel (timings not comparable)" : "sequentially")
      << ".\n\n";

  out << "| Fold";
  for (const auto& n : names) out << " | " << n;
  out << " | dropped_columns |\n|---";
  for (std::size_t c = 0; c <= names.size(); ++c) out << "|---";
  out << "|\n";
  for (const auto& f : report.folds) {
    out << "| " << f.fold;
    for (const double v : report.row(f)) out << " | " << fixed4(v);
    out << " | " << dropped(f) << " |\n";
  }
  return out.str();
}

std::string report_metadata_json(const ExperimentReport& report) {
  using nlohmann::json;
  const auto& cfg = report.config;
  json config = {
      {"manifest", cfg.manifest.string()},
      {"model", to_string(cfg.model)},
      {"kernel", cfg.kernel == KernelKind::Linear ? "linear" : "rbf"},
      {"c", cfg.c},
      {"folds", cfg.folds},
      {"seed", cfg.seed},
      {"subsample", cfg.subsample},
      {"tol", cfg.solver.tol},
      {"max_iter", cfg.solver.max_iter},
      {"normalization", to_string(cfg.normalization)},
      {"drop_degenerate", cfg.drop_degenerate},
      {"br_shared_gram", cfg.br_shared_gram},
      {"parallel_folds", cfg.parallel_folds},
      {"warmup", cfg.warmup},
  };
  config["gamma"] = report.kernel.kind() == KernelKind::Rbf ? json(report.kernel.gamma()) : json();

  json folds = json::array();
  for (const auto& f : report.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_size", f.train_size},
                     {"test_size", f.test_size},
                     {"solver_iterations", f.solver_iterations},
                     {"converged", f.converged},
                     {"dropped_columns", f.dropped_columns},
                     {"warnings", f.warnings}});
  }

  json meta = {
      {"config", config},
      {"dataset",
       {{"name", report.dataset},
        {"task", to_string(report.task)},
        {"samples", report.samples},
        {"features", report.features},
        {"labels", report.labels}}},
      {"std_convention", "sample (n-1)"},
      {"timing", cfg.parallel_folds ? "parallel folds, not comparable" : "sequential"},
      {"folds", folds},
      {"environment",
       {{"compiler", __VERSION__},
        {"hardware_threads", std::thread::hardware_concurrency()}}},
  };
  return meta.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::filesystem::path& out) {
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw DataError("failed writing '" + path.string() + "'");
  };
  write(out, emit_report(report, format));
  write(std::filesystem::path(out.string() + ".meta.json"), report_metadata_json(report));
}

}  // namespace msvm
