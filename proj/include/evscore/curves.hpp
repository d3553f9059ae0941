// evscore/curves.hpp
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

#ifndef EVSCORE_CURVES_HPP
#define EVSCORE_CURVES_HPP

// Threshold sweeps over detection confidences.  At each threshold the
// target-label hypothesis events scoring below it are dropped (their spans
// revert to background), the corpus is rescored with the chosen metric, and
// the operating point (FP rate, FN rate) is recorded.  AUC integrates the
// curve by trapezoids after extending it to the trivial endpoints.

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"
#include "evscore/metrics.hpp"

namespace evscore {

struct DetCurve {
  struct Point {
    double threshold = 0.0;
    double fp_rate = 0.0;
    double fn_rate = 0.0;
  };
  Metric metric = Metric::kOvlp;
  std::vector<Point> points;  // thresholds strictly increasing
  double auc = 0.0;           // DET convention: FN rate over FP rate
};

using DocPair = std::pair<AnnotationDoc, AnnotationDoc>;

// Drops target-label hypothesis events below the threshold and re-fills the
// freed spans with the default label.
inline AnnotationDoc filter_hypothesis(const AnnotationDoc& hyp,
                                       LabelId target, double theta,
                                       LabelId default_label) {
  AnnotationDoc kept;
  kept.duration = hyp.duration;
  kept.source_id = hyp.source_id;
  kept.patient_id = hyp.patient_id;
  for (const Event& e : hyp.events)
    if (!(e.label == target && e.confidence < theta)) kept.events.push_back(e);
  return fill_gaps(kept, default_label);
}

// Sorted distinct confidences of explicit target-label hypothesis events:
// the exact operating points of the corpus.
inline std::vector<double> default_thresholds(
    const std::vector<DocPair>& pairs, LabelId target) {
  std::vector<double> out;
  for (const auto& [ref, hyp] : pairs)
    for (const Event& e : hyp.events)
      if (!e.filled && e.label == target && e.has_confidence)
        out.push_back(e.confidence);
  if (out.empty())
    throw std::invalid_argument(
        "det sweep: no hypothesis confidences present");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<double> uniform_thresholds(int steps) {
  if (steps < 1) throw std::invalid_argument("uniform grid needs >= 1 step");
  std::vector<double> out;
  out.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i)
    out.push_back(static_cast<double>(i) / steps);
  return out;
}

// DET-convention trapezoidal area: FN rate as a function of FP rate, with
// the curve extended to (fp=0, fn=1) and (fp=1, fn=0).
inline double auc_det(std::vector<std::pair<double, double>> fp_fn) {
  std::sort(fp_fn.begin(), fp_fn.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second > b.second;
            });
  fp_fn.insert(fp_fn.begin(), {0.0, 1.0});
  fp_fn.push_back({1.0, 0.0});
  double area = 0.0;
  for (size_t i = 0; i + 1 < fp_fn.size(); ++i)
    area += (fp_fn[i + 1].first - fp_fn[i].first) *
            (fp_fn[i].second + fp_fn[i + 1].second) * 0.5;
  return area;
}

// ROC-convention area: TP rate over FP rate, extended to (0,0) and (1,1).
inline double auc_roc(const std::vector<std::pair<double, double>>& fp_fn) {
  std::vector<std::pair<double, double>> fp_tp;
  fp_tp.reserve(fp_fn.size() + 2);
  for (const auto& [fp, fn] : fp_fn) fp_tp.push_back({fp, 1.0 - fn});
  std::sort(fp_tp.begin(), fp_tp.end());
  fp_tp.insert(fp_tp.begin(), {0.0, 0.0});
  fp_tp.push_back({1.0, 1.0});
  double area = 0.0;
  for (size_t i = 0; i + 1 < fp_tp.size(); ++i)
    area += (fp_tp[i + 1].first - fp_tp[i].first) *
            (fp_tp[i].second + fp_tp[i + 1].second) * 0.5;
  return area;
}

inline double auc_det(const DetCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve.points) pts.push_back({p.fp_rate, p.fn_rate});
  return auc_det(std::move(pts));
}

inline double auc_roc(const DetCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve.points) pts.push_back({p.fp_rate, p.fn_rate});
  return auc_roc(pts);
}

inline DetCurve sweep(const std::vector<DocPair>& pairs, Metric metric,
                      const MetricParams& params, const LabelMap& labels,
                      LabelId default_label, std::vector<double> thresholds) {
  for (size_t i = 0; i + 1 < thresholds.size(); ++i)
    if (!(thresholds[i] < thresholds[i + 1]))
      throw std::invalid_argument("thresholds must be strictly increasing");
  const LabelId target = labels.target_id();

  DetCurve curve;
  curve.metric = metric;
  for (double theta : thresholds) {
    ConfusionCounts total(labels.size());
    if (metric == Metric::kEpoch || metric == Metric::kIra)
      total.joint.assign(static_cast<size_t>(labels.size()) * labels.size(),
                         0.0);
    for (const auto& [ref, hyp] : pairs) {
      AnnotationDoc filtered =
          filter_hypothesis(hyp, target, theta, default_label);
      total = accumulate(total, score_with(metric, ref, filtered, labels,
                                           params));
    }
    const LabelTally& t = total.per_label[target];
    if (t.fp + t.tn == 0.0 || t.fn + t.tp == 0.0)
      throw std::invalid_argument(
          "det sweep: degenerate corpus (a rate denominator is zero)");
    curve.points.push_back(
        {theta, t.fp / (t.fp + t.tn), t.fn / (t.fn + t.tp)});
  }
  curve.auc = auc_det(curve);
  return curve;
}

}  // namespace evscore

#endif  // EVSCORE_CURVES_HPP
