#include "msvm/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "msvm/error.hpp"

namespace msvm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* metric) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(metric) + ": shape mismatch " + a.shape_string() + " vs " +
                         b.shape_string());
  }
}

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

double f1(const Confusion& c) {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

std::vector<Confusion> per_label(const LabelMatrix& truth, const LabelMatrix& predicted,
                                 const char* metric) {
  require_same_shape(truth.values(), predicted.values(), metric);
  std::vector<Confusion> out(truth.cols());
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    for (std::size_t j = 0; j < truth.cols(); ++j) {
      const bool t = truth.positive(i, j);
      const bool p = predicted.positive(i, j);
      if (t && p) ++out[j].tp;
      else if (p) ++out[j].fp;
      else if (t) ++out[j].fn;
    }
  }
  return out;
}

}  // namespace

double exact_match(const LabelMatrix& truth, const LabelMatrix& predicted) {
  require_same_shape(truth.values(), predicted.values(), "exact_match");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < truth.cols() && all; ++j) all = truth(i, j) == predicted(i, j);
    hits += all ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.rows());
}

double hamming_loss(const LabelMatrix& truth, const LabelMatrix& predicted) {
  require_same_shape(truth.values(), predicted.values(), "hamming_loss");
  std::size_t misses = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i)
    for (std::size_t j = 0; j < truth.cols(); ++j) misses += truth(i, j) != predicted(i, j);
  return static_cast<double>(misses) / static_cast<double>(truth.rows() * truth.cols());
}

double macro_f1(const LabelMatrix& truth, const LabelMatrix& predicted) {
  const auto counts = per_label(truth, predicted, "macro_f1");
  double sum = 0.0;
  for (const auto& c : counts) sum += f1(c);
  return sum / static_cast<double>(counts.size());
}

double micro_f1(const LabelMatrix& truth, const LabelMatrix& predicted) {
  Confusion pooled;
  for (const auto& c : per_label(truth, predicted, "micro_f1")) {
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  return f1(pooled);
}

double average_precision(const LabelMatrix& truth, const Matrix& scores) {
  require_same_shape(truth.values(), scores, "average_precision");
  const std::size_t m = truth.cols();
  std::vector<std::size_t> order(m);
  std::vector<std::size_t> rank(m);
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < truth.rows(); ++i) {
    std::size_t positives = 0;
    for (std::size_t j = 0; j < m; ++j) positives += truth.positive(i, j);
    if (positives == 0) continue;

    auto row = scores.row(i);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    for (std::size_t r = 0; r < m; ++r) rank[order[r]] = r + 1;

    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!truth.positive(i, j)) continue;
      std::size_t at_or_above = 0;
      for (std::size_t q = 0; q < m; ++q)
        if (truth.positive(i, q) && rank[q] <= rank[j]) ++at_or_above;
      row_sum += static_cast<double>(at_or_above) / static_cast<double>(rank[j]);
    }
    total += row_sum / static_cast<double>(positives);
    ++used;
  }
  if (used == 0) throw UndefinedMetricError("average_precision: no row has a positive label");
  return total / static_cast<double>(used);
}

MetricReport evaluate(const LabelMatrix& truth, const LabelMatrix& predicted, const Matrix& scores) {
  MetricReport r;
  r.exact_match = exact_match(truth, predicted);
  r.hamming_loss = hamming_loss(truth, predicted);
  r.macro_f1 = macro_f1(truth, predicted);
  r.micro_f1 = micro_f1(truth, predicted);
  r.avg_precision = average_precision(truth, scores);
  return r;
}

}  // namespace msvm
