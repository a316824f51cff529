#pragma once

#include <string>

#include "msvm/matrix.hpp"

namespace msvm {

enum class KernelKind { Linear, Rbf };

/// Linear kernel x1.x2, or RBF exp(-p * |x1 - x2|^2) with width p > 0.
class KernelSpec {
 public:
  static KernelSpec linear() { return KernelSpec(KernelKind::Linear, 0.0); }
  /// Throws ParameterError unless p > 0 and finite.
  static KernelSpec rbf(double p);

  KernelKind kind() const noexcept { return kind_; }
  /// RBF width; 0 for the linear kernel.
  double gamma() const noexcept { return gamma_; }

  /// "linear" or "rbf(p=...)".
  std::string describe() const;

  bool operator==(const KernelSpec&) const = default;

 private:
  KernelSpec(KernelKind kind, double gamma) : kind_(kind), gamma_(gamma) {}

  KernelKind kind_;
  double gamma_;
};

/// Gram matrix between the rows of x1 (n1 x d) and x2 (n2 x d), on raw features.
Matrix gram(const Matrix& x1, const Matrix& x2, const KernelSpec& spec);

/// gram(x1, x2, spec) + 1 entrywise. The +1 is the contribution of the
/// implicit ones column that carries the bias; no ones column is ever
/// materialised for kernel models.
Matrix augmented_gram(const Matrix& x1, const Matrix& x2, const KernelSpec& spec);

}  // namespace msvm
