#include "msvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

#include "msvm/error.hpp"

namespace msvm {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

// Reads non-blank lines, optionally skipping a header, as trimmed cells.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_rows(std::istream& in,
                                                                        bool has_header) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    rows.emplace_back(line_no, split_cells(line));
  }
  return rows;
}

std::string where(const std::string& source, std::size_t line, std::size_t column) {
  return source + ":" + std::to_string(line) + " column " + std::to_string(column + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw DataError("manifest: '" + key + "' must be true or false, got '" + value + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

const char* to_string(TaskKind task) {
  return task == TaskKind::Multiclass ? "multiclass" : "multilabel";
}

DatasetManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  DatasetManifest m;
  bool have_task = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string content = trim(std::string_view(line).substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw DataError("manifest line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key == "name") {
      m.name = value;
    } else if (key == "task") {
      if (value == "multiclass") m.task = TaskKind::Multiclass;
      else if (value == "multilabel") m.task = TaskKind::Multilabel;
      else throw DataError("manifest: unknown task '" + value + "'");
      have_task = true;
    } else if (key == "features_path") {
      m.features_path = base_dir / value;
    } else if (key == "labels_path") {
      m.labels_path = base_dir / value;
    } else if (key == "has_header") {
      m.has_header = parse_bool(value, key);
    } else if (key == "positive_token") {
      m.positive_token = value;
    } else if (key == "negative_token") {
      m.negative_token = value;
    } else {
      throw DataError("manifest line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!have_task) throw DataError("manifest: missing 'task'");
  if (m.features_path.empty()) throw DataError("manifest: missing 'features_path'");
  if (m.labels_path.empty()) throw DataError("manifest: missing 'labels_path'");
  if (m.positive_token == m.negative_token) {
    throw DataError("manifest: positive and negative tokens must differ");
  }
  return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  auto in = open_input(path);
  DatasetManifest m = parse_manifest(in, path.parent_path());
  if (m.name.empty()) m.name = path.stem().string();
  return m;
}

Matrix parse_numeric_csv(std::istream& in, bool has_header, const std::string& source) {
  const auto rows = read_rows(in, has_header);
  if (rows.empty()) throw DataError(source + ": no data rows");
  const std::size_t cols = rows.front().second.size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& [line_no, cells] : rows) {
    if (cells.size() != cols) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(cols) + " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      const char* begin = cell.data();
      const char* end = begin + cell.size();
      if (!cell.empty() && *begin == '+') ++begin;
      const auto [ptr, ec] = std::from_chars(begin, end, v);
      if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw DataError(where(source, line_no, c) + ": non-numeric cell '" + cell + "'");
      }
      values.push_back(v);
    }
  }
  return Matrix(rows.size(), cols, std::move(values));
}

LabelMatrix encode_multiclass(std::span<const std::size_t> ids, std::size_t m) {
  if (ids.empty() || m == 0) throw DataError("encode_multiclass: need at least one id and class");
  Matrix y(ids.size(), m, -1.0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= m) {
      throw DataError("encode_multiclass: class id " + std::to_string(ids[i]) + " at row " +
                      std::to_string(i) + " is outside [0, " + std::to_string(m) + ")");
    }
    y(i, ids[i]) = 1.0;
  }
  return LabelMatrix(std::move(y));
}

Dataset load_dataset(const DatasetManifest& manifest) {
  Dataset ds;
  ds.name = manifest.name;
  ds.task = manifest.task;
  {
    auto in = open_input(manifest.features_path);
    ds.x = parse_numeric_csv(in, manifest.has_header, manifest.features_path.string());
  }

  auto in = open_input(manifest.labels_path);
  const std::string source = manifest.labels_path.string();
  const auto rows = read_rows(in, manifest.has_header);
  if (rows.size() != ds.x.rows()) {
    throw DataError("row-count mismatch: " + std::to_string(ds.x.rows()) + " feature rows, " +
                    std::to_string(rows.size()) + " label rows");
  }

  if (manifest.task == TaskKind::Multiclass) {
    std::vector<std::size_t> ids;
    ids.reserve(rows.size());
    for (const auto& [line_no, cells] : rows) {
      if (cells.size() != 1) {
        throw DataError(source + ":" + std::to_string(line_no) +
                        ": multiclass labels need exactly one column");
      }
      std::size_t id = 0;
      const std::string& cell = cells[0];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), id);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError(where(source, line_no, 0) + ": invalid class id '" + cell + "'");
      }
      ids.push_back(id);
    }
    const std::size_t m = *std::max_element(ids.begin(), ids.end()) + 1;
    ds.y = encode_multiclass(ids, m);
    return ds;
  }

  const std::size_t m = rows.front().second.size();
  Matrix y(rows.size(), m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [line_no, cells] = rows[i];
    if (cells.size() != m) {
      throw DataError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(m) +
                      " label columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (cells[j] == manifest.positive_token) {
        y(i, j) = 1.0;
      } else if (cells[j] == manifest.negative_token) {
        y(i, j) = -1.0;
      } else {
        throw DataError(where(source, line_no, j) + ": unknown label token '" + cells[j] + "'");
      }
    }
  }
  ds.y = LabelMatrix(std::move(y));
  return ds;
}

FeatureScaler FeatureScaler::fit(const Matrix& x) {
  FeatureScaler s;
  s.min_.assign(x.row(0).begin(), x.row(0).end());
  s.max_ = s.min_;
  for (std::size_t i = 1; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      s.min_[j] = std::min(s.min_[j], x(i, j));
      s.max_[j] = std::max(s.max_[j], x(i, j));
    }
  }
  return s;
}

Matrix FeatureScaler::apply(const Matrix& x) const {
  if (x.cols() != min_.size()) {
    throw DimensionError("FeatureScaler: fitted on " + std::to_string(min_.size()) +
                         " columns, got " + x.shape_string());
  }
  Matrix out(x.rows(), x.cols(), 0.0);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    const double range = max_[j] - min_[j];
    if (range == 0.0) continue;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      // Endpoints are set exactly so min and max land on -1 and 1.
      const double v = x(i, j);
      if (v == min_[j]) out(i, j) = -1.0;
      else if (v == max_[j]) out(i, j) = 1.0;
      else out(i, j) = 2.0 * (v - min_[j]) / range - 1.0;
    }
  }
  return out;
}

Matrix normalize_features(const Matrix& x) { return FeatureScaler::fit(x).apply(x); }

std::size_t SplitRng::below(std::size_t bound) {
  if (bound == 0) throw ParameterError("SplitRng::below: bound must be positive");
  using word = std::mt19937_64::result_type;
  const word range = std::numeric_limits<word>::max();
  const word limit = range - (range % bound + 1) % bound;
  word draw;
  do {
    draw = engine_();
  } while (draw > limit);
  return static_cast<std::size_t>(draw % bound);
}

std::vector<std::size_t> SplitRng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[below(i)]);
  return p;
}

std::vector<std::size_t> subsample(std::size_t n_total, std::size_t target, std::uint64_t seed) {
  if (target == 0) throw ParameterError("subsample: target must be at least 1");
  std::vector<std::size_t> idx(n_total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n_total <= target) return idx;
  SplitRng rng(seed);
  for (std::size_t i = 0; i < target; ++i) std::swap(idx[i], idx[i + rng.below(n_total - i)]);
  idx.resize(target);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<Fold> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw ParameterError("kfold_split: need 2 <= k <= n, got k=" + std::to_string(k) +
                         " n=" + std::to_string(n));
  }
  const auto perm = SplitRng(seed).permutation(n);
  std::vector<std::size_t> block_of(n);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t size = n / k + (b < n % k ? 1 : 0);
    for (std::size_t q = 0; q < size; ++q) block_of[perm[pos++]] = b;
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < k; ++b) (b == block_of[i] ? folds[b].test : folds[b].train).push_back(i);
  }
  return folds;
}

}  // namespace msvm
