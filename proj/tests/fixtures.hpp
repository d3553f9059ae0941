// tests/fixtures.hpp
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

#ifndef EVSCORE_TESTS_FIXTURES_HPP
#define EVSCORE_TESTS_FIXTURES_HPP

// Shared fixtures: hand-checked scoring geometries plus random document
// generators for the property suites.

#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "evscore/evscore.hpp"

namespace fixtures {

using evscore::AnnotationDoc;
using evscore::DocPair;
using evscore::Event;
using evscore::LabelMap;

inline LabelMap two_class() {
  return LabelMap::from_names({"seiz", "bckg"}, "seiz");
}

struct Ev {
  double start;
  double stop;
  std::string label;
  double conf = -1.0;  // < 0 means "no explicit confidence"
};

inline AnnotationDoc make_doc(double duration, const std::vector<Ev>& events,
                              const LabelMap& labels) {
  AnnotationDoc doc;
  doc.duration = duration;
  for (const Ev& e : events) {
    Event ev;
    ev.start = e.start;
    ev.stop = e.stop;
    ev.label = *labels.find(e.label);
    if (e.conf >= 0.0) {
      ev.confidence = e.conf;
      ev.has_confidence = true;
    }
    doc.events.push_back(ev);
  }
  return doc;
}

inline DocPair filled_pair(const AnnotationDoc& ref, const AnnotationDoc& hyp,
                           const LabelMap& labels) {
  auto bckg = *labels.find("bckg");
  return {evscore::fill_gaps(ref, bckg), evscore::fill_gaps(hyp, bckg)};
}

// 10 s timeline; the reference has three isolated target events and the
// hypothesis one long event that starts mid-way through the first and runs
// to the end of the recording.  Both annotations are fully explicit.
// Hand-worked expectations: epoch(1s) 5/3/1/1, ovlp 3 TP / 0 FP,
// twv(seiz)=1/3, twv(bckg)=1/4, alignment 1 hit + 2 deletions of seiz.
inline DocPair long_hyp_over_three_refs(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(10.0,
                               {{0, 1, "bckg"},
                                {1, 3, "seiz"},
                                {3, 4, "bckg"},
                                {4, 6, "seiz"},
                                {6, 7, "bckg"},
                                {7, 9, "seiz"},
                                {9, 10, "bckg"}},
                               labels);
  AnnotationDoc hyp =
      make_doc(10.0, {{0, 2, "bckg"}, {2, 10, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

// One target event detected with a late overhang: ref [1,8), hyp [3,9) on a
// 10 s timeline.  Fractional scoring gives 5/7 TP, 2/7 FN, 1/7 FP.
inline DocPair overhanging_detection(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(10.0, {{1, 8, "seiz"}}, labels);
  AnnotationDoc hyp = make_doc(10.0, {{3, 9, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

// One long hypothesis event spanning two reference events entirely, with
// generous spurious time on each side and in between.
inline DocPair single_hyp_spanning_two_refs(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(10.0, {{2, 4, "seiz"}, {6, 8, "seiz"}}, labels);
  AnnotationDoc hyp = make_doc(10.0, {{1, 9, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

// Offset detection: ref [1,8), hyp [3,9) but scored per 1 s epoch, giving
// 5 TP, 2 FN, 1 FP (and 2 TN) on a 10 s timeline.
inline DocPair offset_detection(const LabelMap& labels) {
  return overhanging_detection(labels);
}

// One long reference event chopped into six short hypothesis events, all of
// whose midpoints land inside it: 1 correct detection + 5 spurious.
inline DocPair six_short_hyps_one_ref(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(40.0, {{2, 32, "seiz"}}, labels);
  AnnotationDoc hyp = make_doc(40.0,
                               {{3, 6, "seiz"},
                                {8, 11, "seiz"},
                                {13, 16, "seiz"},
                                {18, 21, "seiz"},
                                {23, 26, "seiz"},
                                {28, 31, "seiz"}},
                               labels);
  return filled_pair(ref, hyp, labels);
}

// Four short reference events bridged by one hypothesis event whose midpoint
// falls in the gap between the middle two: no detections, four misses.
inline DocPair hyp_midpoint_in_gap(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(
      16.0,
      {{1, 3, "seiz"}, {5, 7, "seiz"}, {9, 11, "seiz"}, {13, 15, "seiz"}},
      labels);
  AnnotationDoc hyp = make_doc(16.0, {{2, 14, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

// Degenerate any-overlap cases: 10% overlap either way still counts as a
// full detection.
inline DocPair sliver_hyp_inside_long_ref(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(12.0, {{1, 11, "seiz"}}, labels);
  AnnotationDoc hyp = make_doc(12.0, {{5.5, 6.5, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

inline DocPair long_hyp_over_short_ref(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(12.0, {{5.5, 6.5, "seiz"}}, labels);
  AnnotationDoc hyp = make_doc(12.0, {{1, 11, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

// A 10 s reference event whose second half is detected: fractional scoring
// splits the credit exactly in two.
inline DocPair half_covered_ref(const LabelMap& labels) {
  AnnotationDoc ref = make_doc(12.0, {{1, 11, "seiz"}}, labels);
  AnnotationDoc hyp = make_doc(12.0, {{6, 11, "seiz"}}, labels);
  return filled_pair(ref, hyp, labels);
}

// Random tiled doc whose breakpoints all sit on multiples of `grid`:
// safe for start-sampling vs midpoint-sampling equivalence checks.
inline AnnotationDoc random_grid_doc(std::mt19937& rng, const LabelMap& labels,
                                     double grid, int n_epochs) {
  std::uniform_int_distribution<int> label_dist(0, labels.size() - 1);
  AnnotationDoc doc;
  doc.duration = grid * n_epochs;
  int k = 0;
  while (k < n_epochs) {
    std::uniform_int_distribution<int> run_dist(1, 8);
    int run = std::min(run_dist(rng), n_epochs - k);
    Event ev;
    ev.start = k * grid;
    ev.stop = (k + run) * grid;
    ev.label = label_dist(rng);
    doc.events.push_back(ev);
    k += run;
  }
  return doc;
}

// Random sparse target-event doc on [0, duration]; off-grid boundaries,
// optional random confidences.  Gap-fill before scoring.
inline AnnotationDoc random_event_doc(std::mt19937& rng, const LabelMap& labels,
                                      double duration, bool with_conf = false) {
  std::uniform_real_distribution<double> gap_dist(0.3, 4.0);
  std::uniform_real_distribution<double> len_dist(0.2, 5.0);
  std::uniform_real_distribution<double> conf_dist(0.0, 1.0);
  AnnotationDoc doc;
  doc.duration = duration;
  double cursor = gap_dist(rng);
  while (true) {
    double len = len_dist(rng);
    if (cursor + len >= duration) break;
    Event ev;
    ev.start = cursor;
    ev.stop = cursor + len;
    ev.label = *labels.find("seiz");
    if (with_conf) {
      ev.confidence = conf_dist(rng);
      ev.has_confidence = true;
    }
    doc.events.push_back(ev);
    cursor = ev.stop + gap_dist(rng);
  }
  return doc;
}

inline DocPair random_filled_pair(std::mt19937& rng, const LabelMap& labels,
                                  double duration, bool with_conf = false) {
  return filled_pair(random_event_doc(rng, labels, duration, with_conf),
                     random_event_doc(rng, labels, duration, with_conf),
                     labels);
}

// Balanced slot corpus for threshold sweeps: the timeline is a row of 2 s
// slots, each reference slot either a target event (paired with a correct
// detection at the given confidence) or background (paired with a spurious
// detection).  Per threshold, FN+TP is the target slot count and FP+TN the
// background slot count, the classic ROC normalization.
inline std::vector<DocPair> slot_confidence_corpus(
    const std::vector<double>& correct_conf,
    const std::vector<double>& spurious_conf, const LabelMap& labels) {
  std::vector<Ev> ref_events, hyp_events;
  double t = 0.0;
  size_t i = 0, j = 0;
  while (i < correct_conf.size() || j < spurious_conf.size()) {
    if (i < correct_conf.size()) {
      ref_events.push_back({t, t + 2.0, "seiz"});
      hyp_events.push_back({t, t + 2.0, "seiz", correct_conf[i]});
      t += 2.0;
      ++i;
    }
    if (j < spurious_conf.size()) {
      ref_events.push_back({t, t + 2.0, "bckg"});
      hyp_events.push_back({t, t + 2.0, "seiz", spurious_conf[j]});
      t += 2.0;
      ++j;
    }
  }
  AnnotationDoc ref = make_doc(t, ref_events, labels);
  AnnotationDoc hyp = make_doc(t, hyp_events, labels);
  return {filled_pair(ref, hyp, labels)};
}

}  // namespace fixtures

#endif  // EVSCORE_TESTS_FIXTURES_HPP
