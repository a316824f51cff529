#include "msvm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "msvm/error.hpp"

namespace msvm {

namespace {

void require_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

template <typename Fn>
Matrix zip_with(const Matrix& a, const Matrix& b, const char* op, Fn fn) {
  require_same_shape(a, b, op);
  Matrix out(a.rows(), a.cols());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = fn(av[k], bv[k]);
  return out;
}

// Rows [i, i+R) of a times columns [j, j+W) of b. Each entry accumulates in
// increasing k; the W columns of b are contiguous so the inner loop vectorizes
// across columns without reordering any sum.
template <std::size_t R, std::size_t W>
void product_block(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i, std::size_t j) {
  double acc[R][W] = {};
  const std::size_t n = a.cols();
  const std::size_t ldb = b.cols();
  const double* bv = b.values().data() + j;
  const double* arow[R];
  for (std::size_t r = 0; r < R; ++r) arow[r] = a.row(i + r).data();
  for (std::size_t k = 0; k < n; ++k) {
    const double* bk = bv + k * ldb;
    for (std::size_t r = 0; r < R; ++r) {
      const double ark = arow[r][k];
      for (std::size_t w = 0; w < W; ++w) acc[r][w] += ark * bk[w];
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t w = 0; w < W; ++w) out(i + r, j + w) = acc[r][w];
  }
}

template <std::size_t R>
void product_rows(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i) {
  std::size_t j = 0;
  for (; j + 8 <= b.cols(); j += 8) product_block<R, 8>(a, b, out, i, j);
  if (j + 4 <= b.cols()) {
    product_block<R, 4>(a, b, out, i, j);
    j += 4;
  }
  if (j + 2 <= b.cols()) {
    product_block<R, 2>(a, b, out, i, j);
    j += 2;
  }
  if (j < b.cols()) product_block<R, 1>(a, b, out, i, j);
}

// Four rows of `a` against one row `b`; each result uses exactly the lane
// pattern of dot() so blocked and unblocked products agree bitwise.
void dot4(const double* a0, const double* a1, const double* a2, const double* a3,
          const double* b, std::size_t n, double* result) {
  double s00 = 0, s01 = 0, s02 = 0, s03 = 0;
  double s10 = 0, s11 = 0, s12 = 0, s13 = 0;
  double s20 = 0, s21 = 0, s22 = 0, s23 = 0;
  double s30 = 0, s31 = 0, s32 = 0, s33 = 0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const double b0 = b[k], b1 = b[k + 1], b2 = b[k + 2], b3 = b[k + 3];
    s00 += a0[k] * b0; s01 += a0[k + 1] * b1; s02 += a0[k + 2] * b2; s03 += a0[k + 3] * b3;
    s10 += a1[k] * b0; s11 += a1[k + 1] * b1; s12 += a1[k + 2] * b2; s13 += a1[k + 3] * b3;
    s20 += a2[k] * b0; s21 += a2[k + 1] * b1; s22 += a2[k + 2] * b2; s23 += a2[k + 3] * b3;
    s30 += a3[k] * b0; s31 += a3[k + 1] * b1; s32 += a3[k + 2] * b2; s33 += a3[k + 3] * b3;
  }
  double r0 = (s00 + s01) + (s02 + s03);
  double r1 = (s10 + s11) + (s12 + s13);
  double r2 = (s20 + s21) + (s22 + s23);
  double r3 = (s30 + s31) + (s32 + s33);
  for (; k < n; ++k) {
    r0 += a0[k] * b[k];
    r1 += a1[k] * b[k];
    r2 += a2[k] * b[k];
    r3 += a3[k] * b[k];
  }
  result[0] = r0;
  result[1] = r1;
  result[2] = r2;
  result[3] = r3;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  require_dims(rows, cols);
  values_.assign(rows * cols, fill);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require_dims(rows, cols);
  if (values_.size() != rows * cols) {
    throw DimensionError("matrix " + shape_string() + " needs " + std::to_string(rows * cols) +
                         " values, got " + std::to_string(values_.size()));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  require_dims(rows_, cols_);
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  return zip_with(a, b, "hadamard", [](double x, double y) { return x * y; });
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

double trace_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "trace_inner");
  double sum = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) sum += av[k] * bv[k];
  return sum;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

void multiply_transposed_into(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.cols() != b.cols()) {
    throw DimensionError("multiply_transposed: inner dimensions differ " + a.shape_string() +
                         " vs " + b.shape_string() + "^T");
  }
  if (out.rows() != a.rows() || out.cols() != b.rows()) {
    throw DimensionError("multiply_transposed: output is " + out.shape_string() + ", expected " +
                         std::to_string(a.rows()) + "x" + std::to_string(b.rows()));
  }
  const std::size_t n = a.cols();
  const std::size_t out_cols = out.cols();
  double* ov = out.values().data();
  double block[4];
  // Each row of b is loaded once and reused against every row of a.
  for (std::size_t j = 0; j < b.rows(); ++j) {
    const double* bj = b.row(j).data();
    std::size_t i = 0;
    for (; i + 4 <= a.rows(); i += 4) {
      dot4(a.row(i).data(), a.row(i + 1).data(), a.row(i + 2).data(), a.row(i + 3).data(), bj, n,
           block);
      for (std::size_t q = 0; q < 4; ++q) ov[(i + q) * out_cols + j] = block[q];
    }
    for (; i < a.rows(); ++i) ov[i * out_cols + j] = dot(a.row(i), b.row(j));
  }
}

Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("multiply_transposed: inner dimensions differ " + a.shape_string() +
                         " vs " + b.shape_string() + "^T");
  }
  Matrix out(a.rows(), b.rows());
  multiply_transposed_into(a, b, out);
  return out;
}

void multiply_into(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions differ " + a.shape_string() + " * " +
                         b.shape_string());
  }
  if (out.rows() != a.rows() || out.cols() != b.cols()) {
    throw DimensionError("multiply: output is " + out.shape_string() + ", expected " +
                         std::to_string(a.rows()) + "x" + std::to_string(b.cols()));
  }
  std::size_t i = 0;
  for (; i + 4 <= a.rows(); i += 4) product_rows<4>(a, b, out, i);
  for (; i < a.rows(); ++i) product_rows<1>(a, b, out, i);
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions differ " + a.shape_string() + " * " +
                         b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  multiply_into(a, b, out);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  return zip_with(a, b, "add", [](double x, double y) { return x + y; });
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  return zip_with(a, b, "subtract", [](double x, double y) { return x - y; });
}

Matrix scale(const Matrix& a, double factor) {
  Matrix out = a;
  for (double& v : out.values()) v *= factor;
  return out;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_difference");
  double worst = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) worst = std::max(worst, std::abs(av[k] - bv[k]));
  return worst;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix select_rows(const Matrix& a, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), a.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= a.rows()) throw DimensionError("select_rows: index out of range");
    std::copy(a.row(indices[r]).begin(), a.row(indices[r]).end(), out.row(r).begin());
  }
  return out;
}

Matrix select_cols(const Matrix& a, std::span<const std::size_t> indices) {
  Matrix out(a.rows(), indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] >= a.cols()) throw DimensionError("select_cols: index out of range");
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, c) = a(i, indices[c]);
  }
  return out;
}

Matrix append_ones_column(const Matrix& a) {
  Matrix out(a.rows(), a.cols() + 1, 1.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    std::copy(a.row(i).begin(), a.row(i).end(), out.row(i).begin());
  return out;
}

}  // namespace msvm
