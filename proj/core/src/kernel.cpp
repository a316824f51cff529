#include "msvm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "msvm/error.hpp"

namespace msvm {

KernelSpec KernelSpec::rbf(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw ParameterError("RBF width p must be positive and finite, got " + std::to_string(p));
  }
  return KernelSpec(KernelKind::Rbf, p);
}

std::string KernelSpec::describe() const {
  if (kind_ == KernelKind::Linear) return "linear";
  std::ostringstream os;
  os << "rbf(p=" << gamma_ << ")";
  return os.str();
}

Matrix gram(const Matrix& x1, const Matrix& x2, const KernelSpec& spec) {
  if (x1.cols() != x2.cols()) {
    throw DimensionError("gram: feature dimension mismatch " + x1.shape_string() + " vs " +
                         x2.shape_string());
  }
  Matrix k = multiply_transposed(x1, x2);
  if (spec.kind() == KernelKind::Linear) return k;

  std::vector<double> sq1(x1.rows());
  std::vector<double> sq2(x2.rows());
  for (std::size_t i = 0; i < x1.rows(); ++i) sq1[i] = dot(x1.row(i), x1.row(i));
  for (std::size_t j = 0; j < x2.rows(); ++j) sq2[j] = dot(x2.row(j), x2.row(j));
  const double p = spec.gamma();
  for (std::size_t i = 0; i < k.rows(); ++i) {
    auto row = k.row(i);
    for (std::size_t j = 0; j < k.cols(); ++j) {
      // The expansion can go slightly negative for coincident points.
      const double dist2 = std::max(0.0, sq1[i] + sq2[j] - 2.0 * row[j]);
      row[j] = std::exp(-p * dist2);
    }
  }
  return k;
}

Matrix augmented_gram(const Matrix& x1, const Matrix& x2, const KernelSpec& spec) {
  Matrix k = gram(x1, x2, spec);
  for (double& v : k.values()) v += 1.0;
  return k;
}

}  // namespace msvm
