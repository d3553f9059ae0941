// evscore/atwv.hpp
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

#ifndef EVSCORE_ATWV_HPP
#define EVSCORE_ATWV_HPP

// Term-weighted value scoring: reward each correct detection, penalize each
// false alarm.  A kept hypothesis event is a correct detection when its
// midpoint lies inside a not-yet-claimed reference event of the same label
// (boundaries inclusive); otherwise it is spurious.  Per label,
//
//   P_miss = 1 - N_correct / N_ref
//   P_fa   = N_spurious / N_nt,   N_nt = T_source(seconds) - N_ref(count)
//   TWV    = 1 - P_miss - beta * P_fa
//
// and the headline value is the unweighted mean of per-label TWV.  Only
// events actually present in the input files take part: gap-filled
// background is neither a reference term nor a detection trial, so a system
// with no output scores exactly 0.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"

namespace evscore {

struct AtwvParams {
  double beta = 999.9;  // false-alarm penalty weight
  double theta = 0.0;   // detection threshold; events below it are dropped
};

// Raw per-label detection tallies; summable across file pairs so TWV can be
// derived from corpus totals.
struct AtwvCounts {
  std::vector<double> n_ref;       // reference terms per label
  std::vector<double> n_correct;   // claimed detections per label
  std::vector<double> n_spurious;  // unclaimed detections per label
  double t_source = 0.0;           // scored duration, seconds

  explicit AtwvCounts(int n_labels = 0)
      : n_ref(n_labels, 0.0),
        n_correct(n_labels, 0.0),
        n_spurious(n_labels, 0.0) {}

  int n_labels() const { return static_cast<int>(n_ref.size()); }

  AtwvCounts& operator+=(const AtwvCounts& other) {
    if (n_labels() != other.n_labels())
      throw std::invalid_argument("AtwvCounts: label-set mismatch");
    for (int i = 0; i < n_labels(); ++i) {
      n_ref[i] += other.n_ref[i];
      n_correct[i] += other.n_correct[i];
      n_spurious[i] += other.n_spurious[i];
    }
    t_source += other.t_source;
    return *this;
  }
};

struct AtwvResult {
  AtwvCounts raw;
  std::vector<std::optional<double>> twv;  // per label
  std::optional<double> atwv;              // mean of defined per-label TWVs
};

inline AtwvCounts atwv_counts(const AnnotationDoc& ref,
                              const AnnotationDoc& hyp,
                              const LabelMap& labels,
                              const AtwvParams& params = {}) {
  const int k = labels.size();
  AtwvCounts counts(k);
  counts.t_source = ref.duration;

  std::vector<std::vector<const Event*>> refs(k), hyps(k);
  for (const Event& e : ref.events)
    if (!e.filled) {
      refs[e.label].push_back(&e);
      counts.n_ref[e.label] += 1.0;
    }
  for (const Event& e : hyp.events) {
    if (e.filled) continue;
    if (params.theta > 0.0 && !e.has_confidence)
      throw std::invalid_argument(
          "atwv: hypothesis event lacks a confidence but theta > 0");
    if (e.confidence >= params.theta) hyps[e.label].push_back(&e);
  }

  for (int l = 0; l < k; ++l) {
    std::vector<char> claimed(refs[l].size(), 0);
    for (const Event* h : hyps[l]) {
      double mid = h->midpoint();
      // Closed-interval containment; a midpoint on a shared boundary claims
      // the earlier unmatched candidate.
      bool correct = false;
      for (size_t i = 0; i < refs[l].size(); ++i) {
        const Event* r = refs[l][i];
        if (r->start > mid) break;
        if (mid <= r->stop && !claimed[i]) {
          claimed[i] = 1;
          correct = true;
          break;
        }
      }
      if (correct) counts.n_correct[l] += 1.0;
      else counts.n_spurious[l] += 1.0;
    }
  }
  return counts;
}

// TWV per label from raw tallies.  Labels with no reference terms have no
// miss probability and are excluded from the average; so are labels whose
// non-target trial count T_source - N_ref is not positive.
inline AtwvResult derive_twv(const AtwvCounts& counts, double beta) {
  AtwvResult res;
  res.raw = counts;
  res.twv.resize(counts.n_labels());
  double sum = 0.0;
  int defined = 0;
  for (int l = 0; l < counts.n_labels(); ++l) {
    if (counts.n_ref[l] <= 0.0) continue;
    double n_nt = counts.t_source - counts.n_ref[l];
    if (n_nt <= 0.0) continue;
    double p_miss = 1.0 - counts.n_correct[l] / counts.n_ref[l];
    double p_fa = counts.n_spurious[l] / n_nt;
    res.twv[l] = 1.0 - p_miss - beta * p_fa;
    sum += *res.twv[l];
    ++defined;
  }
  if (defined > 0) res.atwv = sum / defined;
  return res;
}

inline ConfusionCounts atwv_confusion(const AtwvCounts& counts) {
  ConfusionCounts out(counts.n_labels());
  out.total_duration = counts.t_source;
  for (int l = 0; l < counts.n_labels(); ++l) {
    out.per_label[l].tp = counts.n_correct[l];
    out.per_label[l].fn = counts.n_ref[l] - counts.n_correct[l];
    out.per_label[l].fp = counts.n_spurious[l];
    out.n_ref_events[l] = counts.n_ref[l];
    out.n_hyp_events[l] = counts.n_correct[l] + counts.n_spurious[l];
  }
  for (int l = 0; l < counts.n_labels(); ++l)
    for (int o = 0; o < counts.n_labels(); ++o)
      if (o != l) out.per_label[l].tn += out.per_label[o].tp;
  return out;
}

inline AtwvResult score_atwv(const AnnotationDoc& ref, const AnnotationDoc& hyp,
                             const LabelMap& labels,
                             const AtwvParams& params = {}) {
  return derive_twv(atwv_counts(ref, hyp, labels, params), params.beta);
}

}  // namespace evscore

#endif  // EVSCORE_ATWV_HPP
