// evscore/report.hpp
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

#ifndef EVSCORE_REPORT_HPP
#define EVSCORE_REPORT_HPP

// Report assembly and rendering.  Both output forms carry the raw counts,
// not just ratios: every printed ratio can be recomputed from the embedded
// counts.  Ordering is canonical (metric name, then label name, then ref
// path) so reports are byte-stable regardless of input or scheduling order.

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evscore/atwv.hpp"
#include "evscore/counts.hpp"
#include "evscore/curves.hpp"
#include "evscore/metrics.hpp"

namespace evscore {

inline constexpr const char* kToolName = "evscore";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct FileScore {
  std::string ref_path;
  std::string hyp_path;
  std::string patient_id;
  ConfusionCounts counts;
  std::optional<AtwvResult> atwv;  // present for the atwv metric
  std::string alignment_text;      // dpalign only, when alignments are emitted
};

struct DpalignTotals {
  long long hits = 0, subs = 0, ins = 0, dels = 0;
};

struct MetricSection {
  Metric metric = Metric::kEpoch;
  ConfusionCounts corpus;
  std::optional<AtwvResult> atwv;           // corpus-level TWV
  std::optional<DpalignTotals> alignment;   // corpus-level edit counts
  std::vector<FileScore> files;
};

struct MetricReport {
  Json config;  // echo of the run configuration
  std::vector<MetricSection> sections;
};

namespace detail {

inline Json opt_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

inline std::string fmt_opt(const std::optional<double>& v, int prec = 4) {
  if (!v) return "--";
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << *v;
  return os.str();
}

inline std::string fmt_num(double v, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

// Label ids in canonical (alphabetical) report order.
inline std::vector<LabelId> report_label_order(const LabelMap& labels) {
  std::vector<LabelId> ids(labels.size());
  for (int i = 0; i < labels.size(); ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(), [&](LabelId a, LabelId b) {
    return labels.name(a) < labels.name(b);
  });
  return ids;
}

}  // namespace detail

inline Json counts_to_json(const ConfusionCounts& counts,
                           const LabelMap& labels) {
  Json j;
  j["total_duration"] = counts.total_duration;
  Json lbls = Json::object();
  for (LabelId id : detail::report_label_order(labels)) {
    const LabelTally& t = counts.per_label[id];
    Json lj;
    lj["tp"] = t.tp;
    lj["tn"] = t.tn;
    lj["fp"] = t.fp;
    lj["fn"] = t.fn;
    lj["n_ref_events"] = counts.n_ref_events[id];
    lj["n_hyp_events"] = counts.n_hyp_events[id];
    DerivedMeasures m = derive(counts, id);
    Json dj;
    dj["sensitivity"] = detail::opt_json(m.sensitivity);
    dj["specificity"] = detail::opt_json(m.specificity);
    dj["accuracy"] = detail::opt_json(m.accuracy);
    dj["precision"] = detail::opt_json(m.precision);
    dj["f1"] = detail::opt_json(m.f1);
    dj["fa_per_24h"] = detail::opt_json(m.fa_per_24h);
    dj["kappa"] = detail::opt_json(m.kappa);
    lj["derived"] = dj;
    lbls[labels.name(id)] = lj;
  }
  j["labels"] = lbls;
  if (counts.has_joint()) {
    Json rows = Json::array();
    for (int r = 0; r < counts.n_labels(); ++r) {
      Json row = Json::array();
      for (int h = 0; h < counts.n_labels(); ++h)
        row.push_back(counts.joint_at(r, h));
      rows.push_back(row);
    }
    j["joint"] = rows;
  }
  return j;
}

// Inverse of counts_to_json; used by report consumers and the round-trip
// checks.  The label map must match the one the report was written with.
inline ConfusionCounts counts_from_json(const Json& j, const LabelMap& labels) {
  ConfusionCounts counts(labels.size());
  counts.total_duration = j.at("total_duration").get<double>();
  for (const auto& [name, lj] : j.at("labels").items()) {
    auto id = labels.find(name);
    if (!id) throw std::invalid_argument("report label not in map: " + name);
    counts.per_label[*id].tp = lj.at("tp").get<double>();
    counts.per_label[*id].tn = lj.at("tn").get<double>();
    counts.per_label[*id].fp = lj.at("fp").get<double>();
    counts.per_label[*id].fn = lj.at("fn").get<double>();
    counts.n_ref_events[*id] = lj.at("n_ref_events").get<double>();
    counts.n_hyp_events[*id] = lj.at("n_hyp_events").get<double>();
  }
  if (j.contains("joint")) {
    const int k = labels.size();
    counts.joint.assign(static_cast<size_t>(k) * k, 0.0);
    for (int r = 0; r < k; ++r)
      for (int h = 0; h < k; ++h)
        counts.joint_at(r, h) = j.at("joint").at(r).at(h).get<double>();
  }
  return counts;
}

inline Json report_to_json(const MetricReport& report, const LabelMap& labels) {
  Json j;
  j["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
  j["config"] = report.config;
  Json metrics = Json::object();
  for (const MetricSection& sec : report.sections) {
    Json mj;
    mj["corpus"] = counts_to_json(sec.corpus, labels);
    if (sec.atwv) {
      Json twv = Json::object();
      for (LabelId id : detail::report_label_order(labels))
        twv[labels.name(id)] = detail::opt_json(sec.atwv->twv[id]);
      mj["twv"] = twv;
      mj["atwv"] = detail::opt_json(sec.atwv->atwv);
    }
    if (sec.alignment) {
      mj["alignment"] = Json{{"hits", sec.alignment->hits},
                             {"subs", sec.alignment->subs},
                             {"ins", sec.alignment->ins},
                             {"dels", sec.alignment->dels}};
    }
    Json files = Json::array();
    for (const FileScore& fs : sec.files) {
      Json fj;
      fj["ref"] = fs.ref_path;
      fj["hyp"] = fs.hyp_path;
      fj["patient"] = fs.patient_id;
      fj["counts"] = counts_to_json(fs.counts, labels);
      if (fs.atwv) fj["atwv"] = detail::opt_json(fs.atwv->atwv);
      files.push_back(fj);
    }
    mj["files"] = files;
    metrics[metric_name(sec.metric)] = mj;
  }
  j["metrics"] = metrics;
  return j;
}

inline std::string report_to_text(const MetricReport& report,
                                  const LabelMap& labels) {
  std::ostringstream os;
  os << kToolName << " " << kToolVersion << " scoring report\n";
  for (const MetricSection& sec : report.sections) {
    os << "\n==== " << metric_name(sec.metric) << " ====\n";
    os << std::left << std::setw(8) << "label" << std::right << std::setw(12)
       << "tp" << std::setw(12) << "tn" << std::setw(12) << "fp"
       << std::setw(12) << "fn" << std::setw(10) << "sens" << std::setw(10)
       << "spec" << std::setw(10) << "acc" << std::setw(10) << "prec"
       << std::setw(10) << "f1" << std::setw(12) << "fa/24h" << std::setw(10)
       << "kappa" << "\n";
    for (LabelId id : detail::report_label_order(labels)) {
      const LabelTally& t = sec.corpus.per_label[id];
      DerivedMeasures m = derive(sec.corpus, id);
      os << std::left << std::setw(8) << labels.name(id) << std::right
         << std::setw(12) << detail::fmt_num(t.tp) << std::setw(12)
         << detail::fmt_num(t.tn) << std::setw(12) << detail::fmt_num(t.fp)
         << std::setw(12) << detail::fmt_num(t.fn) << std::setw(10)
         << detail::fmt_opt(m.sensitivity) << std::setw(10)
         << detail::fmt_opt(m.specificity) << std::setw(10)
         << detail::fmt_opt(m.accuracy) << std::setw(10)
         << detail::fmt_opt(m.precision) << std::setw(10)
         << detail::fmt_opt(m.f1) << std::setw(12)
         << detail::fmt_opt(m.fa_per_24h, 2) << std::setw(10)
         << detail::fmt_opt(m.kappa) << "\n";
    }
    if (sec.atwv) {
      for (LabelId id : detail::report_label_order(labels))
        os << "TWV(" << labels.name(id)
           << ") = " << detail::fmt_opt(sec.atwv->twv[id]) << "\n";
      os << "ATWV = " << detail::fmt_opt(sec.atwv->atwv) << "\n";
    }
    if (sec.alignment) {
      os << "Hits: " << sec.alignment->hits << " Sub: " << sec.alignment->subs
         << " Ins: " << sec.alignment->ins << " Del: " << sec.alignment->dels
         << "\n";
    }
    if (sec.files.size() > 1) {
      os << "files:\n";
      for (const FileScore& fs : sec.files) {
        DerivedMeasures m = derive(fs.counts, labels.target_id());
        os << "  " << fs.ref_path << " vs " << fs.hyp_path << " ["
           << fs.patient_id << "]"
           << " sens=" << detail::fmt_opt(m.sensitivity)
           << " spec=" << detail::fmt_opt(m.specificity)
           << " fa/24h=" << detail::fmt_opt(m.fa_per_24h, 2) << "\n";
      }
    }
    for (const FileScore& fs : sec.files)
      if (!fs.alignment_text.empty())
        os << "alignment " << fs.ref_path << " vs " << fs.hyp_path << ":\n"
           << fs.alignment_text;
  }
  return os.str();
}

inline Json curve_to_json(const DetCurve& curve) {
  Json j;
  j["metric"] = metric_name(curve.metric);
  Json pts = Json::array();
  for (const auto& p : curve.points)
    pts.push_back(Json{{"threshold", p.threshold},
                       {"fp_rate", p.fp_rate},
                       {"fn_rate", p.fn_rate}});
  j["points"] = pts;
  j["auc_det"] = curve.auc;
  j["auc_roc"] = auc_roc(curve);
  return j;
}

// Plot-ready whitespace columns: threshold, fp_rate, fn_rate.
inline std::string curve_to_text(const DetCurve& curve) {
  std::ostringstream os;
  os << "# metric: " << metric_name(curve.metric) << "\n";
  os << "# threshold fp_rate fn_rate\n";
  for (const auto& p : curve.points)
    os << detail::fmt_num(p.threshold, 6) << " " << detail::fmt_num(p.fp_rate, 6)
       << " " << detail::fmt_num(p.fn_rate, 6) << "\n";
  os << "# auc_det " << detail::fmt_num(curve.auc, 6) << "\n";
  os << "# auc_roc " << detail::fmt_num(auc_roc(curve), 6) << "\n";
  return os.str();
}

}  // namespace evscore

#endif  // EVSCORE_REPORT_HPP
