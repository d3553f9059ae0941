// evscore/taes.hpp
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

#ifndef EVSCORE_TAES_HPP
#define EVSCORE_TAES_HPP

// Time-aligned event scoring: per-event fractional credit.
//
// A detected reference event earns TP equal to the fraction of its duration
// covered by same-label hypothesis events, and FN for the uncovered rest, so
// TP + FN is exactly 1 per credited event.  Spurious hypothesis time earns
// fractional FP against the duration of the nearest overlapped reference
// event, capped at 1 per hypothesis event; a hypothesis event touching no
// reference event is a full false alarm.
//
// When one hypothesis event spans several reference events, the default
// first-only policy credits the earliest and counts each later one as a
// full miss; credit-all scores every overlapped reference event instead.

#include <algorithm>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"

namespace evscore {

enum class TaesMultiRefPolicy { kFirstOnly, kCreditAll };

struct TaesParams {
  TaesMultiRefPolicy multi_ref_policy = TaesMultiRefPolicy::kFirstOnly;
};

namespace detail {

inline void score_taes_label(const std::vector<const Event*>& refs,
                             const std::vector<const Event*>& hyps,
                             const TaesParams& params, LabelTally& tally) {
  const size_t n = refs.size();
  std::vector<char> credited(n, 0), overlapped(n, 0);
  std::vector<double> coverage(n, 0.0);

  size_t lo = 0;
  for (const Event* h : hyps) {
    while (lo < n && refs[lo]->stop <= h->start) ++lo;
    std::vector<size_t> touched;  // refs this hyp overlaps, in time order
    for (size_t j = lo; j < n && refs[j]->start < h->stop; ++j)
      if (overlap_length(h->start, h->stop, refs[j]->start, refs[j]->stop) >
          0.0)
        touched.push_back(j);

    if (touched.empty()) {
      tally.fp += 1.0;  // wholly spurious detection
      continue;
    }

    // Fractional FP: each maximal uncovered piece of the hyp event is scored
    // against the duration of the nearest overlapped reference event, then
    // the event total is capped at 1.
    double fp_event = 0.0;
    double cursor = h->start;
    for (size_t idx = 0; idx < touched.size(); ++idx) {
      const Event* r = refs[touched[idx]];
      if (r->start > cursor) {
        double len = std::min(r->start, h->stop) - cursor;
        const Event* nearest = idx == 0 ? r : refs[touched[idx - 1]];
        fp_event += len / nearest->duration();
      }
      cursor = std::max(cursor, r->stop);
    }
    if (cursor < h->stop)
      fp_event += (h->stop - cursor) / refs[touched.back()]->duration();
    tally.fp += std::min(1.0, fp_event);

    if (params.multi_ref_policy == TaesMultiRefPolicy::kFirstOnly) {
      size_t first = touched.front();
      credited[first] = 1;
      coverage[first] +=
          overlap_length(h->start, h->stop, refs[first]->start,
                         refs[first]->stop);
      for (size_t idx : touched) overlapped[idx] = 1;
    } else {
      for (size_t idx : touched) {
        credited[idx] = 1;
        overlapped[idx] = 1;
        coverage[idx] += overlap_length(h->start, h->stop, refs[idx]->start,
                                        refs[idx]->stop);
      }
    }
  }

  for (size_t i = 0; i < n; ++i) {
    if (credited[i]) {
      double tp = std::min(1.0, coverage[i] / refs[i]->duration());
      tally.tp += tp;
      tally.fn += 1.0 - tp;
    } else {
      // Missed outright, or reached only as a later detection of a long
      // hypothesis event: a full miss either way.
      tally.fn += 1.0;
    }
  }
}

}  // namespace detail

inline ConfusionCounts score_taes(const AnnotationDoc& ref,
                                  const AnnotationDoc& hyp,
                                  const LabelMap& labels,
                                  const TaesParams& params = {}) {
  const int k = labels.size();
  ConfusionCounts counts(k);
  counts.total_duration = ref.duration;

  std::vector<std::vector<const Event*>> ref_by_label(k), hyp_by_label(k);
  for (const Event& e : ref.events) {
    ref_by_label[e.label].push_back(&e);
    counts.n_ref_events[e.label] += 1.0;
  }
  for (const Event& e : hyp.events) {
    hyp_by_label[e.label].push_back(&e);
    counts.n_hyp_events[e.label] += 1.0;
  }

  for (int l = 0; l < k; ++l)
    detail::score_taes_label(ref_by_label[l], hyp_by_label[l], params,
                             counts.per_label[l]);

  for (int l = 0; l < k; ++l)
    for (int o = 0; o < k; ++o)
      if (o != l) counts.per_label[l].tn += counts.per_label[o].tp;
  return counts;
}

}  // namespace evscore

#endif  // EVSCORE_TAES_HPP
