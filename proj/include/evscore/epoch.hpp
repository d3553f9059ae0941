// evscore/epoch.hpp
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

#ifndef EVSCORE_EPOCH_HPP
#define EVSCORE_EPOCH_HPP

// Epoch-based scoring: treat both annotations as signals, sample them at a
// fixed epoch duration, and tally the label confusion matrix.  Every epoch
// contributes exactly one cell, so per label tp+tn+fp+fn equals the number
// of sampled epochs.

#include <cmath>
#include <stdexcept>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"

namespace evscore {

struct EpochParams {
  double epoch_duration = 0.25;  // seconds
};

// Samples both docs at epoch midpoints t = (k + 0.5) * epoch_duration for
// every k with t < duration.  Midpoint sampling keeps boundary instants
// unambiguous under half-open intervals; a trailing partial epoch is scored
// iff its midpoint still lies inside the recording.
inline ConfusionCounts score_epoch(const AnnotationDoc& ref,
                                   const AnnotationDoc& hyp,
                                   const LabelMap& labels,
                                   const EpochParams& params = {}) {
  if (!(params.epoch_duration > 0.0))
    throw std::invalid_argument("epoch_duration must be positive");
  if (std::abs(ref.duration - hyp.duration) > 1e-9)
    throw std::invalid_argument("score_epoch: duration mismatch");
  if (!ref.is_tiled() || !hyp.is_tiled())
    throw std::invalid_argument("score_epoch: docs must be gap-filled");

  const int k = labels.size();
  ConfusionCounts counts(k);
  counts.total_duration = ref.duration;
  counts.joint.assign(static_cast<size_t>(k) * k, 0.0);
  for (const Event& e : ref.events) counts.n_ref_events[e.label] += 1.0;
  for (const Event& e : hyp.events) counts.n_hyp_events[e.label] += 1.0;

  size_t ri = 0, hi = 0;
  for (long long epoch = 0;; ++epoch) {
    double t = (static_cast<double>(epoch) + 0.5) * params.epoch_duration;
    if (!(t < ref.duration)) break;
    while (ri < ref.events.size() && ref.events[ri].stop <= t) ++ri;
    while (hi < hyp.events.size() && hyp.events[hi].stop <= t) ++hi;
    counts.joint_at(ref.events[ri].label, hyp.events[hi].label) += 1.0;
  }

  // Project the joint matrix onto one-vs-rest tallies.
  double total = 0.0;
  for (int r = 0; r < k; ++r)
    for (int h = 0; h < k; ++h) total += counts.joint_at(r, h);
  for (int l = 0; l < k; ++l) {
    double tp = counts.joint_at(l, l);
    double fn = 0.0, fp = 0.0;
    for (int o = 0; o < k; ++o) {
      if (o == l) continue;
      fn += counts.joint_at(l, o);
      fp += counts.joint_at(o, l);
    }
    counts.per_label[l] = LabelTally{tp, total - tp - fn - fp, fp, fn};
  }
  return counts;
}

}  // namespace evscore

#endif  // EVSCORE_EPOCH_HPP
