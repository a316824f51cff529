#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace msvm {

/// Dense row-major matrix of doubles.
///
/// Every explicitly sized instance has at least one row and one column. A
/// default-constructed matrix is an empty placeholder (0 x 0) that only
/// supports assignment, `empty()` and comparison.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 0.0); }
  static Matrix ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  /// "RxC", used in error messages.
  std::string shape_string() const;

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Entrywise product. Throws DimensionError on shape mismatch.
Matrix hadamard(const Matrix& a, const Matrix& b);

/// sqrt of the sum of squared entries.
double frobenius_norm(const Matrix& a);

/// Tr(A^T B), i.e. the sum of entrywise products in row-major order.
double trace_inner(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

/// a * b. Entry (i, j) is the sum over k of a(i, k) * b(k, j) taken in
/// increasing k, so an entry never depends on the other rows of a or the
/// other columns of b.
Matrix multiply(const Matrix& a, const Matrix& b);

/// In-place form of multiply; `out` must already be a.rows() x b.cols().
void multiply_into(const Matrix& a, const Matrix& b, Matrix& out);

/// a * b^T. Entry (i, j) is dot(a.row(i), b.row(j)) with the summation
/// order of `dot`, so an entry never depends on how many rows a or b have.
Matrix multiply_transposed(const Matrix& a, const Matrix& b);

/// In-place form of multiply_transposed; `out` must already be a.rows() x b.rows().
void multiply_transposed_into(const Matrix& a, const Matrix& b, Matrix& out);

/// Dot product with four interleaved partial sums, combined as (s0+s1)+(s2+s3),
/// then the tail added left to right.
double dot(std::span<const double> a, std::span<const double> b);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);

/// Largest absolute entrywise difference (sup norm of a - b).
double max_abs_difference(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);

Matrix select_rows(const Matrix& a, std::span<const std::size_t> indices);
Matrix select_cols(const Matrix& a, std::span<const std::size_t> indices);

/// Copy of `a` with a trailing column of ones.
Matrix append_ones_column(const Matrix& a);

}  // namespace msvm
