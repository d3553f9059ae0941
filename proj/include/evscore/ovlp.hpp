// evscore/ovlp.hpp
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

#ifndef EVSCORE_OVLP_HPP
#define EVSCORE_OVLP_HPP

// Any-overlap scoring: binary per-event credit.  A reference event counts as
// detected when any same-label hypothesis event overlaps it (after widening
// the reference by the guard band); a hypothesis event overlapping no
// same-label reference event is one false alarm.  Splitting one reference
// event across several hypothesis events neither loses the detection nor
// adds false alarms.

#include <stdexcept>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"

namespace evscore {

struct OvlpParams {
  double guard_band = 0.0;  // seconds added to each side of a reference event
};

// Every label is scored symmetrically as an event class, so true negatives
// for a label are the detections tallied for the complementary labels.
// With gap-filled two-class docs this makes TN(target) the background TP,
// which is what specificity is derived from.
inline ConfusionCounts score_ovlp(const AnnotationDoc& ref,
                                  const AnnotationDoc& hyp,
                                  const LabelMap& labels,
                                  const OvlpParams& params = {}) {
  if (params.guard_band < 0.0)
    throw std::invalid_argument("guard_band must be non-negative");
  const double g = params.guard_band;
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

  for (int l = 0; l < k; ++l) {
    const auto& refs = ref_by_label[l];
    const auto& hyps = hyp_by_label[l];
    LabelTally& t = counts.per_label[l];

    // Half-open overlap against the widened reference window.
    auto overlaps = [&](const Event& r, const Event& h) {
      return h.start < r.stop + g && h.stop > r.start - g;
    };

    size_t hi = 0;
    for (const Event* r : refs) {
      while (hi < hyps.size() && hyps[hi]->stop <= r->start - g) ++hi;
      bool hit = false;
      for (size_t j = hi; j < hyps.size() && hyps[j]->start < r->stop + g; ++j)
        if (overlaps(*r, *hyps[j])) {
          hit = true;
          break;
        }
      if (hit) t.tp += 1.0;
      else t.fn += 1.0;
    }

    size_t ri = 0;
    for (const Event* h : hyps) {
      while (ri < refs.size() && refs[ri]->stop + g <= h->start) ++ri;
      bool hit = false;
      for (size_t j = ri; j < refs.size() && refs[j]->start - g < h->stop; ++j)
        if (overlaps(*refs[j], *h)) {
          hit = true;
          break;
        }
      if (!hit) t.fp += 1.0;
    }
  }

  for (int l = 0; l < k; ++l)
    for (int o = 0; o < k; ++o)
      if (o != l) counts.per_label[l].tn += counts.per_label[o].tp;
  return counts;
}

}  // namespace evscore

#endif  // EVSCORE_OVLP_HPP
