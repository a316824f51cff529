#include "msvm/labels.hpp"

#include <utility>

#include "msvm/error.hpp"

namespace msvm {

LabelMatrix::LabelMatrix(Matrix values) : values_(std::move(values)) {
  for (double v : values_.values()) {
    if (v != 1.0 && v != -1.0) {
      throw ParameterError("label matrix entries must be -1 or +1, got " + std::to_string(v));
    }
  }
}

LabelMatrix LabelMatrix::from_signs(const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  auto zv = z.values();
  auto ov = out.values();
  for (std::size_t k = 0; k < zv.size(); ++k) ov[k] = zv[k] >= 0.0 ? 1.0 : -1.0;
  return LabelMatrix(std::move(out));
}

LabelMatrix LabelMatrix::column(std::size_t j) const {
  const std::size_t idx[] = {j};
  return msvm::select_cols(*this, idx);
}

bool LabelMatrix::column_has_both_classes(std::size_t j) const {
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < rows(); ++i) {
    (positive(i, j) ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

LabelMatrix select_rows(const LabelMatrix& y, std::span<const std::size_t> indices) {
  return LabelMatrix(select_rows(y.values(), indices));
}

LabelMatrix select_cols(const LabelMatrix& y, std::span<const std::size_t> indices) {
  return LabelMatrix(select_cols(y.values(), indices));
}

}  // namespace msvm
