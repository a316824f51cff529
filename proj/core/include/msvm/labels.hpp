#pragma once

#include <cstddef>
#include <span>

#include "msvm/matrix.hpp"

namespace msvm {

/// n x m matrix over {-1, +1}: ground truth Y or a prediction.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  /// Throws ParameterError if any entry is not exactly -1 or +1.
  explicit LabelMatrix(Matrix values);

  /// +1 where z >= 0, -1 elsewhere.
  static LabelMatrix from_signs(const Matrix& z);

  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }
  bool empty() const noexcept { return values_.empty(); }

  int operator()(std::size_t i, std::size_t j) const { return values_(i, j) > 0 ? 1 : -1; }
  bool positive(std::size_t i, std::size_t j) const { return values_(i, j) > 0; }

  /// The labels as a real matrix, for algebra with scores and multipliers.
  const Matrix& values() const noexcept { return values_; }

  LabelMatrix column(std::size_t j) const;
  /// True when column j holds both classes.
  bool column_has_both_classes(std::size_t j) const;

  bool operator==(const LabelMatrix&) const = default;

 private:
  Matrix values_;
};

LabelMatrix select_rows(const LabelMatrix& y, std::span<const std::size_t> indices);
LabelMatrix select_cols(const LabelMatrix& y, std::span<const std::size_t> indices);

}  // namespace msvm
