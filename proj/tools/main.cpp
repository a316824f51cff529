#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "msvm/dataset.hpp"
#include "msvm/error.hpp"
#include "msvm/experiment.hpp"
#include "msvm/model.hpp"
#include "msvm/model_io.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kData = 3, kNumeric = 4 };

const std::map<std::string, msvm::ModelKind> kModels = {
    {"matrix", msvm::ModelKind::MatrixSvm},
    {"br", msvm::ModelKind::BinaryRelevance},
    {"ls", msvm::ModelKind::LeastSquares},
};
const std::map<std::string, msvm::KernelKind> kKernels = {
    {"linear", msvm::KernelKind::Linear},
    {"rbf", msvm::KernelKind::Rbf},
};
const std::map<std::string, msvm::ReportFormat> kFormats = {
    {"csv", msvm::ReportFormat::Csv},
    {"md", msvm::ReportFormat::Markdown},
};

struct RunArgs {
  std::string manifest;
  std::string model = "matrix";
  std::string kernel = "rbf";
  std::optional<double> gamma;
  double c = 1.0;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  std::size_t subsample = 4000;
  double tol = 1e-5;
  std::size_t max_iter = 1000;
  bool parallel_folds = false;
  bool per_fold_normalization = false;
  bool drop_degenerate = false;
  bool br_shared_gram = false;
  bool no_warmup = false;
  std::string out;
  std::string format = "csv";
};

struct TrainArgs {
  std::string manifest;
  std::string model = "matrix";
  std::string kernel = "rbf";
  std::optional<double> gamma;
  double c = 1.0;
  double tol = 1e-5;
  std::size_t max_iter = 1000;
  std::string out;
};

struct PredictArgs {
  std::string model_file;
  std::string features;
  bool has_header = false;
  bool multiclass = false;
  std::string out;
};

msvm::ExperimentConfig to_config(const RunArgs& a) {
  msvm::ExperimentConfig cfg;
  cfg.manifest = a.manifest;
  cfg.model = kModels.at(a.model);
  cfg.kernel = kKernels.at(a.kernel);
  cfg.gamma = a.gamma;
  cfg.c = a.c;
  cfg.folds = a.folds;
  cfg.seed = a.seed;
  cfg.subsample = a.subsample;
  cfg.solver.tol = a.tol;
  cfg.solver.max_iter = a.max_iter;
  cfg.parallel_folds = a.parallel_folds;
  cfg.normalization =
      a.per_fold_normalization ? msvm::NormalizationMode::PerFold : msvm::NormalizationMode::Global;
  cfg.drop_degenerate = a.drop_degenerate;
  cfg.br_shared_gram = a.br_shared_gram;
  cfg.warmup = !a.no_warmup;
  return cfg;
}

int run(const RunArgs& args) {
  const auto cfg = to_config(args);
  const auto report = msvm::run_experiment(cfg);
  msvm::write_report(report, kFormats.at(args.format), args.out);
  const auto agg = report.aggregate();
  std::cerr << report.dataset << ": " << report.folds.size() << " folds, " << agg[0].name << ' '
            << agg[0].mean << " mean; report written to " << args.out << '\n';
  return kOk;
}

int train(const TrainArgs& args) {
  msvm::ExperimentConfig cfg;
  cfg.model = kModels.at(args.model);
  cfg.kernel = kKernels.at(args.kernel);
  cfg.gamma = args.gamma;
  cfg.c = args.c;
  cfg.solver.tol = args.tol;
  cfg.solver.max_iter = args.max_iter;
  cfg.validate();

  const auto data = msvm::load_dataset(msvm::read_manifest(args.manifest));
  const auto kernel = cfg.kernel_spec(data.task);
  msvm::TrainedModel model;
  switch (cfg.model) {
    case msvm::ModelKind::MatrixSvm:
      model = msvm::fit_matrix_svm(data.x, data.y, kernel, cfg.c, cfg.solver);
      break;
    case msvm::ModelKind::BinaryRelevance:
      model = msvm::fit_br_svm(data.x, data.y, kernel, cfg.c, cfg.solver);
      break;
    case msvm::ModelKind::LeastSquares:
      model = msvm::fit_ls_matrix_svm(data.x, data.y, cfg.c);
      break;
  }
  for (const auto& w : model.warnings) std::cerr << "warning: " << w << '\n';
  if (model.kind != msvm::ModelKind::LeastSquares) model = msvm::prune_support_vectors(model);
  msvm::save_model(model, args.out);
  std::cerr << "trained " << msvm::to_string(model.kind) << " on " << data.x.rows() << " x "
            << data.x.cols() << " in " << model.fit_seconds << " s ("
            << model.solver_iterations << " iterations"
            << (model.converged ? "" : ", not converged") << ")\n";
  return kOk;
}

int predict(const PredictArgs& args) {
  const auto model = msvm::load_model(args.model_file);
  std::ifstream in(args.features);
  if (!in) throw msvm::DataError("cannot open '" + args.features + "'");
  const auto x = msvm::parse_numeric_csv(in, args.has_header, args.features);
  const auto scores = msvm::decision_scores(model, x);

  std::ofstream out(args.out);
  if (!out) throw msvm::DataError("cannot open '" + args.out + "' for writing");
  if (args.multiclass) {
    const auto pred = msvm::predict_multiclass(scores);
    for (const auto c : pred.classes) out << c << '\n';
  } else {
    const auto pred = msvm::predict_multilabel(scores);
    for (std::size_t i = 0; i < pred.rows(); ++i) {
      for (std::size_t j = 0; j < pred.cols(); ++j) {
        out << (j ? "," : "") << (pred.positive(i, j) ? 1 : 0);
      }
      out << '\n';
    }
  }
  if (!out) throw msvm::DataError("failed writing '" + args.out + "'");
  return kOk;
}

void add_model_options(CLI::App* cmd, std::string& model, std::string& kernel,
                       std::optional<double>& gamma, double& c, double& tol,
                       std::size_t& max_iter) {
  cmd->add_option("--model", model, "Model: matrix, br or ls")
      ->check(CLI::IsMember({"matrix", "br", "ls"}))
      ->capture_default_str();
  cmd->add_option("--kernel", kernel, "Kernel: linear or rbf")
      ->check(CLI::IsMember({"linear", "rbf"}))
      ->capture_default_str();
  cmd->add_option("--gamma", gamma,
                  "RBF width p in exp(-p |a-b|^2); default 0.7 multiclass, 0.3 multilabel");
  cmd->add_option("--c", c, "Box bound c")->capture_default_str();
  cmd->add_option("--tol", tol, "Relative step tolerance")->capture_default_str();
  cmd->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel multiclass / multilabel SVM trainer and cross-validation harness"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Cross-validate a model on a dataset manifest");
  run_cmd->add_option("--manifest", run_args.manifest, "Dataset manifest")->required();
  add_model_options(run_cmd, run_args.model, run_args.kernel, run_args.gamma, run_args.c,
                    run_args.tol, run_args.max_iter);
  run_cmd->add_option("--folds", run_args.folds, "Number of folds")->capture_default_str();
  run_cmd->add_option("--seed", run_args.seed, "Seed for subsampling and folds")
      ->capture_default_str();
  run_cmd->add_option("--subsample", run_args.subsample, "Maximum number of rows used")
      ->capture_default_str();
  run_cmd->add_flag("--parallel-folds", run_args.parallel_folds, "Run folds concurrently");
  run_cmd->add_flag("--per-fold-normalization", run_args.per_fold_normalization,
                    "Fit feature scaling on each training split");
  run_cmd->add_flag("--drop-degenerate", run_args.drop_degenerate,
                    "Drop single-class label columns per fold instead of failing");
  run_cmd->add_flag("--br-shared-gram", run_args.br_shared_gram,
                    "br only: build the Gram matrix once for all columns");
  run_cmd->add_flag("--no-warmup", run_args.no_warmup, "Skip the discarded warm-up fit");
  run_cmd->add_option("--out", run_args.out, "Report path")->required();
  run_cmd->add_option("--format", run_args.format, "Report format: csv or md")
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Fit on a whole dataset and save the model");
  train_cmd->add_option("--manifest", train_args.manifest, "Dataset manifest")->required();
  add_model_options(train_cmd, train_args.model, train_args.kernel, train_args.gamma,
                    train_args.c, train_args.tol, train_args.max_iter);
  train_cmd->add_option("--out", train_args.out, "Model file")->required();

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Score a features CSV with a saved model");
  predict_cmd->add_option("--model-file", predict_args.model_file, "Model file")->required();
  predict_cmd->add_option("--features", predict_args.features, "Features CSV")->required();
  predict_cmd->add_flag("--has-header", predict_args.has_header, "Skip the first CSV line");
  predict_cmd->add_flag("--multiclass", predict_args.multiclass,
                        "Write one 0-based class id per row instead of 0/1 label columns");
  predict_cmd->add_option("--out", predict_args.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return run(run_args);
    if (*train_cmd) return train(train_args);
    if (*predict_cmd) return predict(predict_args);
  } catch (const msvm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const msvm::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const msvm::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const msvm::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
