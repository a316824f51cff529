#pragma once

#include "msvm/labels.hpp"
#include "msvm/matrix.hpp"

namespace msvm {

// Positives are the +1 entries. Every function throws DimensionError when the
// two arguments differ in shape.

/// Fraction of rows whose whole label vector is predicted exactly (subset accuracy).
double exact_match(const LabelMatrix& truth, const LabelMatrix& predicted);

/// Fraction of label slots predicted incorrectly.
double hamming_loss(const LabelMatrix& truth, const LabelMatrix& predicted);

/// Unweighted mean of per-label F1 = 2TP / (2TP + FP + FN); a label with no
/// true and no predicted positives scores 0.
double macro_f1(const LabelMatrix& truth, const LabelMatrix& predicted);

/// F1 over TP/FP/FN pooled across all labels; 0 when there are no positives at all.
double micro_f1(const LabelMatrix& truth, const LabelMatrix& predicted);

/// Label-ranking average precision. Within a row, labels are ranked by
/// descending score with ties to the lower label index; each positive label
/// contributes |positives ranked at or above it| / its rank. Rows without
/// positives are skipped; if every row is skipped, UndefinedMetricError.
double average_precision(const LabelMatrix& truth, const Matrix& scores);

struct MetricReport {
  double exact_match = 0.0;
  double hamming_loss = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double avg_precision = 0.0;
};

MetricReport evaluate(const LabelMatrix& truth, const LabelMatrix& predicted, const Matrix& scores);

}  // namespace msvm
