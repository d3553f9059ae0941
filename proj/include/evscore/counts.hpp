// evscore/counts.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABILITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef EVSCORE_COUNTS_HPP
#define EVSCORE_COUNTS_HPP

// Confusion-count algebra shared by every scorer, plus the derived scalar
// measures (sensitivity, specificity, accuracy, precision, F1, FA/24h,
// Cohen's kappa).  Tallies are real-valued: fractional-credit scorers
// contribute non-integer counts.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evscore/annot.hpp"

namespace evscore {

struct LabelTally {
  double tp = 0.0;
  double tn = 0.0;
  double fp = 0.0;
  double fn = 0.0;
};

// Per-label tallies for one scored pair (or an accumulated corpus).
// `joint` is the full ref-by-hyp confusion matrix; only time-sampled scoring
// fills it, and it is what multi-class kappa is computed from.
struct ConfusionCounts {
  std::vector<LabelTally> per_label;
  std::vector<double> n_ref_events;  // event counts per label
  std::vector<double> n_hyp_events;
  double total_duration = 0.0;       // seconds of scored timeline
  std::vector<double> joint;         // optional KxK matrix, row = ref label

  explicit ConfusionCounts(int n_labels = 0)
      : per_label(n_labels),
        n_ref_events(n_labels, 0.0),
        n_hyp_events(n_labels, 0.0) {}

  int n_labels() const { return static_cast<int>(per_label.size()); }
  bool has_joint() const { return !joint.empty(); }

  double& joint_at(LabelId ref, LabelId hyp) {
    return joint[static_cast<size_t>(ref) * per_label.size() + hyp];
  }
  double joint_at(LabelId ref, LabelId hyp) const {
    return joint[static_cast<size_t>(ref) * per_label.size() + hyp];
  }
};

// Ratios are nullopt when their denominator is zero; reports render those
// as "--" and averages skip them, so an empty hypothesis is never silently
// rewarded with a perfect score.
struct DerivedMeasures {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> f1;
  std::optional<double> fa_per_24h;
  std::optional<double> kappa;
};

namespace detail {

inline std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace detail

// Cohen's kappa, (p_o - p_e) / (1 - p_e).  Uses the full joint confusion
// matrix when the counts carry one; otherwise falls back to the 2x2 table
// of the focus label {tp, fn / fp, tn}.  Degenerate perfect agreement
// (p_o = p_e = 1) is defined as kappa = 1.
inline std::optional<double> kappa(const ConfusionCounts& counts,
                                   LabelId focus_label) {
  double po_num = 0.0, total = 0.0;
  std::vector<double> row, col;

  if (counts.has_joint()) {
    const int k = counts.n_labels();
    row.assign(k, 0.0);
    col.assign(k, 0.0);
    for (int r = 0; r < k; ++r)
      for (int h = 0; h < k; ++h) {
        double v = counts.joint_at(r, h);
        total += v;
        row[r] += v;
        col[h] += v;
        if (r == h) po_num += v;
      }
  } else {
    const LabelTally& t = counts.per_label.at(focus_label);
    total = t.tp + t.tn + t.fp + t.fn;
    po_num = t.tp + t.tn;
    row = {t.tp + t.fn, t.fp + t.tn};  // ref marginals
    col = {t.tp + t.fp, t.fn + t.tn};  // hyp marginals
  }

  if (total == 0.0) return std::nullopt;
  double po = po_num / total;
  double pe = 0.0;
  for (size_t i = 0; i < row.size(); ++i)
    pe += (row[i] / total) * (col[i] / total);
  if (pe >= 1.0) return po >= 1.0 ? std::optional<double>(1.0) : std::nullopt;
  return (po - pe) / (1.0 - pe);
}

// Derived scalar measures for one label.  FA/24h normalizes false alarms by
// the scored duration: FP * 86400 / total_duration.
inline DerivedMeasures derive(const ConfusionCounts& counts,
                              LabelId focus_label) {
  const LabelTally& t = counts.per_label.at(focus_label);
  DerivedMeasures m;
  m.sensitivity = detail::ratio(t.tp, t.tp + t.fn);
  m.specificity = detail::ratio(t.tn, t.tn + t.fp);
  m.accuracy = detail::ratio(t.tp + t.tn, t.tp + t.fn + t.tn + t.fp);
  m.precision = detail::ratio(t.tp, t.tp + t.fp);
  if (m.precision && m.sensitivity) {
    double p = *m.precision, r = *m.sensitivity;
    if (p + r > 0.0)
      m.f1 = 2.0 * p * r / (p + r);
  }
  if (counts.total_duration > 0.0)
    m.fa_per_24h = t.fp * 86400.0 / counts.total_duration;
  m.kappa = kappa(counts, focus_label);
  return m;
}

// Element-wise sum of two tallies over the same label set.
inline ConfusionCounts accumulate(const ConfusionCounts& a,
                                  const ConfusionCounts& b) {
  if (a.n_labels() != b.n_labels())
    throw std::invalid_argument("accumulate: label-set mismatch");
  ConfusionCounts out(a.n_labels());
  for (int i = 0; i < a.n_labels(); ++i) {
    out.per_label[i].tp = a.per_label[i].tp + b.per_label[i].tp;
    out.per_label[i].tn = a.per_label[i].tn + b.per_label[i].tn;
    out.per_label[i].fp = a.per_label[i].fp + b.per_label[i].fp;
    out.per_label[i].fn = a.per_label[i].fn + b.per_label[i].fn;
    out.n_ref_events[i] = a.n_ref_events[i] + b.n_ref_events[i];
    out.n_hyp_events[i] = a.n_hyp_events[i] + b.n_hyp_events[i];
  }
  out.total_duration = a.total_duration + b.total_duration;
  // A side without a joint matrix contributes implicit zeros.
  if (a.has_joint() && b.has_joint()) {
    out.joint.resize(a.joint.size());
    for (size_t i = 0; i < a.joint.size(); ++i)
      out.joint[i] = a.joint[i] + b.joint[i];
  } else if (a.has_joint()) {
    out.joint = a.joint;
  } else if (b.has_joint()) {
    out.joint = b.joint;
  }
  return out;
}

}  // namespace evscore

#endif  // EVSCORE_COUNTS_HPP
