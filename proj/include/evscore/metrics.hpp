// evscore/metrics.hpp
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

#ifndef EVSCORE_METRICS_HPP
#define EVSCORE_METRICS_HPP

// Uniform handle over the individual scorers, so batch drivers and threshold
// sweeps can rescore with any metric by id.  IRA is epoch scoring reported
// through Cohen's kappa rather than a scorer of its own.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/atwv.hpp"
#include "evscore/counts.hpp"
#include "evscore/dpalign.hpp"
#include "evscore/epoch.hpp"
#include "evscore/ovlp.hpp"
#include "evscore/taes.hpp"

namespace evscore {

enum class Metric { kAtwv, kDpalign, kEpoch, kOvlp, kTaes, kIra };

inline const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> m = {Metric::kAtwv, Metric::kDpalign,
                                        Metric::kEpoch, Metric::kOvlp,
                                        Metric::kTaes,  Metric::kIra};
  return m;
}

inline std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kAtwv: return "atwv";
    case Metric::kDpalign: return "dpalign";
    case Metric::kEpoch: return "epoch";
    case Metric::kOvlp: return "ovlp";
    case Metric::kTaes: return "taes";
    case Metric::kIra: return "ira";
  }
  throw std::logic_error("unreachable");
}

inline std::optional<Metric> metric_from_name(const std::string& name) {
  for (Metric m : all_metrics())
    if (metric_name(m) == name) return m;
  return std::nullopt;
}

struct MetricParams {
  EpochParams epoch;
  OvlpParams ovlp;
  TaesParams taes;
  AtwvParams atwv;
};

// Confusion counts for one gap-filled pair under one metric.
inline ConfusionCounts score_with(Metric metric, const AnnotationDoc& ref,
                                  const AnnotationDoc& hyp,
                                  const LabelMap& labels,
                                  const MetricParams& params) {
  switch (metric) {
    case Metric::kAtwv:
      return atwv_confusion(atwv_counts(ref, hyp, labels, params.atwv));
    case Metric::kDpalign:
      return score_dpalign(ref, hyp, labels);
    case Metric::kEpoch:
    case Metric::kIra:
      return score_epoch(ref, hyp, labels, params.epoch);
    case Metric::kOvlp:
      return score_ovlp(ref, hyp, labels, params.ovlp);
    case Metric::kTaes:
      return score_taes(ref, hyp, labels, params.taes);
  }
  throw std::logic_error("unreachable");
}

}  // namespace evscore

#endif  // EVSCORE_METRICS_HPP
