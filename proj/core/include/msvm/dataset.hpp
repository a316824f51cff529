#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "msvm/labels.hpp"
#include "msvm/matrix.hpp"

namespace msvm {

enum class TaskKind { Multiclass, Multilabel };

const char* to_string(TaskKind task);

/// Describes a dataset stored as a features CSV and a labels CSV.
///
/// Manifest files are flat `key=value` lines; `#` starts a comment. Keys:
/// name, task (multiclass|multilabel), features_path, labels_path,
/// has_header (true|false), positive_token, negative_token. Relative paths
/// are resolved against the manifest's directory. Unknown keys are rejected.
struct DatasetManifest {
  std::string name;
  TaskKind task = TaskKind::Multilabel;
  std::filesystem::path features_path;
  std::filesystem::path labels_path;
  bool has_header = false;
  std::string positive_token = "1";
  std::string negative_token = "0";
};

DatasetManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct Dataset {
  std::string name;
  TaskKind task = TaskKind::Multilabel;
  Matrix x;       ///< n x d features
  LabelMatrix y;  ///< n x m, one +1 per row for multiclass data
};

/// Reads both CSV files. Multilabel labels are n x m tokens; multiclass labels
/// are one column of class ids 0..m-1, one-hot encoded with m = max id + 1.
/// Throws DataError on row-count mismatch, non-numeric cells (with line and
/// column), ragged rows or unknown label tokens.
Dataset load_dataset(const DatasetManifest& manifest);

/// Parses comma-separated numeric rows. `source` names the input in errors.
Matrix parse_numeric_csv(std::istream& in, bool has_header, const std::string& source);

/// Row i gets +1 at column ids[i] and -1 elsewhere. Throws DataError if an id >= m.
LabelMatrix encode_multiclass(std::span<const std::size_t> ids, std::size_t m);

/// Per-column affine map onto [-1, 1] fitted on one matrix and applicable to
/// another. Constant columns map to 0.
class FeatureScaler {
 public:
  static FeatureScaler fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

/// x' = 2 (x - min_j) / (max_j - min_j) - 1 per column; constant columns become 0.
Matrix normalize_features(const Matrix& x);

/// Seeded generator shared by the splitting helpers. The engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; bounded
/// draws use rejection sampling rather than std::uniform_int_distribution so
/// results are identical across standard libraries.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [0, bound); bound must be positive.
  std::size_t below(std::size_t bound);
  /// Uniform random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Sorted indices of a uniform sample of `target` rows without replacement, or
/// 0..n_total-1 when n_total <= target.
std::vector<std::size_t> subsample(std::size_t n_total, std::size_t target, std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train;  ///< sorted
  std::vector<std::size_t> test;   ///< sorted
};

/// Seeded permutation cut into k contiguous blocks; the first n % k blocks hold
/// one extra index. Fold i tests on block i. Throws ParameterError unless 2 <= k <= n.
std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace msvm
