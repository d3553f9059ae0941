// evscore/runner.hpp
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

#ifndef EVSCORE_RUNNER_HPP
#define EVSCORE_RUNNER_HPP

// Batch drivers behind the CLI subcommands: load a pair list, score every
// pair with the selected metrics, and emit reports, DET curves, or
// cross-system statistics.
//
// File pairs are scored on a worker pool, but per-pair results land in a
// vector indexed by pair order and corpus totals are reduced sequentially
// from it, so reports are byte-identical whatever the worker count.

#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"
#include "evscore/curves.hpp"
#include "evscore/metrics.hpp"
#include "evscore/report.hpp"
#include "evscore/stats.hpp"

namespace evscore {

// Unreadable or unparseable input; distinct from configuration misuse so the
// CLI can map them to different exit codes.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExclusionPolicy { kPerPair, kGlobal };

struct RunConfig {
  std::string pair_list_path;
  std::vector<Metric> metrics = all_metrics();
  std::vector<std::string> label_names = {"seiz", "bckg"};
  std::string target_label = "seiz";
  std::string default_label = "bckg";
  double epoch_duration = 0.25;
  double guard_band = 0.0;
  double beta = 999.9;
  double theta = 0.0;
  TaesMultiRefPolicy taes_policy = TaesMultiRefPolicy::kFirstOnly;
  double alpha = 0.05;
  ExclusionPolicy exclusion = ExclusionPolicy::kPerPair;
  std::string threshold_grid;  // "" = distinct confidences, or "uniform:<n>"
  int jobs = 1;                // 0 = one worker per hardware thread
  bool emit_alignments = false;  // include per-pair alignment printouts

  LabelMap make_label_map() const {
    return LabelMap::from_names(label_names, target_label);
  }

  MetricParams make_params() const {
    MetricParams p;
    p.epoch.epoch_duration = epoch_duration;
    p.ovlp.guard_band = guard_band;
    p.taes.multi_ref_policy = taes_policy;
    p.atwv.beta = beta;
    p.atwv.theta = theta;
    return p;
  }

  void validate() const {
    if (metrics.empty()) throw std::invalid_argument("no metrics selected");
    if (!(epoch_duration > 0.0))
      throw std::invalid_argument("epoch duration must be positive");
    if (guard_band < 0.0)
      throw std::invalid_argument("guard band must be non-negative");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (theta < 0.0 || theta > 1.0)
      throw std::invalid_argument("theta must be in [0,1]");
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("alpha must be in (0,1)");
    LabelMap lm = make_label_map();  // throws on bad label set
    if (!lm.find(default_label))
      throw std::invalid_argument("default label '" + default_label +
                                  "' not in label list");
  }

  Json echo() const {
    Json j;
    j["pair_list"] = pair_list_path;
    Json ms = Json::array();
    for (Metric m : metrics) ms.push_back(metric_name(m));
    j["metrics"] = ms;
    j["labels"] = label_names;
    j["target_label"] = target_label;
    j["default_label"] = default_label;
    j["epoch_duration"] = epoch_duration;
    j["guard_band"] = guard_band;
    j["beta"] = beta;
    j["theta"] = theta;
    j["taes_policy"] = taes_policy == TaesMultiRefPolicy::kFirstOnly
                           ? "first-only"
                           : "credit-all";
    j["alpha"] = alpha;
    return j;
  }
};

namespace detail {

// Runs f(i) for i in [0, n) on `jobs` workers.  Exceptions are captured per
// index and the lowest-index one is rethrown, so failures are reported
// deterministically.
template <typename F>
void parallel_for(size_t n, int jobs, F&& f) {
  if (jobs == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    jobs = hw == 0 ? 1 : static_cast<int>(hw);
  }
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (size_t i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

inline AnnotationDoc load_annotation(const std::string& path,
                                     const LabelMap& labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open annotation file: " + path);
  return parse_annotation(in, labels, path);
}

}  // namespace detail

inline PairList load_pair_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pair list: " + path);
  return parse_pair_list(in, path);
}

// Parses both sides of a pair, extends them to their common duration, and
// gap-fills with the default label.
inline DocPair load_pair(const PairList::Entry& entry, const LabelMap& labels,
                         LabelId default_label) {
  AnnotationDoc ref = detail::load_annotation(entry.ref_path, labels);
  AnnotationDoc hyp = detail::load_annotation(entry.hyp_path, labels);
  ref.patient_id = entry.patient_id;
  hyp.patient_id = entry.patient_id;
  double duration = std::max(ref.duration, hyp.duration);
  ref.duration = duration;
  hyp.duration = duration;
  return {fill_gaps(ref, default_label), fill_gaps(hyp, default_label)};
}

namespace detail {

struct PairOutcome {
  PairList::Entry entry;
  std::map<Metric, ConfusionCounts> counts;
  std::optional<AtwvCounts> atwv;
  std::optional<DpalignTotals> alignment;
  std::string alignment_text;
};

inline PairOutcome score_pair(const PairList::Entry& entry,
                              const LabelMap& labels, LabelId default_label,
                              const std::vector<Metric>& metrics,
                              const MetricParams& params,
                              bool emit_alignments) {
  auto [ref, hyp] = load_pair(entry, labels, default_label);
  PairOutcome out;
  out.entry = entry;
  std::optional<ConfusionCounts> epoch_cache;
  for (Metric m : metrics) {
    if (m == Metric::kEpoch || m == Metric::kIra) {
      if (!epoch_cache)
        epoch_cache = score_epoch(ref, hyp, labels, params.epoch);
      out.counts.emplace(m, *epoch_cache);
      continue;
    }
    out.counts.emplace(m, score_with(m, ref, hyp, labels, params));
    if (m == Metric::kAtwv)
      out.atwv = atwv_counts(ref, hyp, labels, params.atwv);
    if (m == Metric::kDpalign) {
      Alignment ali = align(label_sequence(ref), label_sequence(hyp));
      out.alignment = DpalignTotals{ali.hits, ali.subs, ali.ins, ali.dels};
      if (emit_alignments) out.alignment_text = format_alignment(ali, labels);
    }
  }
  return out;
}

inline std::vector<Metric> canonical_metric_order(std::vector<Metric> ms) {
  std::sort(ms.begin(), ms.end(), [](Metric a, Metric b) {
    return metric_name(a) < metric_name(b);
  });
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

}  // namespace detail

// Scores every pair with every selected metric and assembles the report.
inline MetricReport run_score(const RunConfig& config) {
  config.validate();
  const LabelMap labels = config.make_label_map();
  const LabelId default_label = *labels.find(config.default_label);
  const MetricParams params = config.make_params();
  const PairList pairs = load_pair_list(config.pair_list_path);

  std::vector<detail::PairOutcome> outcomes(pairs.entries.size());
  detail::parallel_for(pairs.entries.size(), config.jobs, [&](size_t i) {
    outcomes[i] =
        detail::score_pair(pairs.entries[i], labels, default_label,
                           config.metrics, params, config.emit_alignments);
  });

  // Canonical order: sort outcomes by (ref, hyp) path for the per-file
  // sections; corpus sums are order-independent.
  std::vector<const detail::PairOutcome*> ordered;
  ordered.reserve(outcomes.size());
  for (const auto& o : outcomes) ordered.push_back(&o);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    if (a->entry.ref_path != b->entry.ref_path)
      return a->entry.ref_path < b->entry.ref_path;
    return a->entry.hyp_path < b->entry.hyp_path;
  });

  MetricReport report;
  report.config = config.echo();
  for (Metric m : detail::canonical_metric_order(config.metrics)) {
    MetricSection sec;
    sec.metric = m;
    sec.corpus = ConfusionCounts(labels.size());
    if (m == Metric::kEpoch || m == Metric::kIra)
      sec.corpus.joint.assign(
          static_cast<size_t>(labels.size()) * labels.size(), 0.0);
    AtwvCounts atwv_total(labels.size());
    DpalignTotals dp_total;
    for (const auto* o : ordered) {
      const ConfusionCounts& c = o->counts.at(m);
      sec.corpus = accumulate(sec.corpus, c);
      FileScore fs;
      fs.ref_path = o->entry.ref_path;
      fs.hyp_path = o->entry.hyp_path;
      fs.patient_id = o->entry.patient_id;
      fs.counts = c;
      if (m == Metric::kAtwv && o->atwv) {
        atwv_total += *o->atwv;
        fs.atwv = derive_twv(*o->atwv, config.beta);
      }
      if (m == Metric::kDpalign && o->alignment) {
        dp_total.hits += o->alignment->hits;
        dp_total.subs += o->alignment->subs;
        dp_total.ins += o->alignment->ins;
        dp_total.dels += o->alignment->dels;
        fs.alignment_text = o->alignment_text;
      }
      sec.files.push_back(std::move(fs));
    }
    if (m == Metric::kAtwv) sec.atwv = derive_twv(atwv_total, config.beta);
    if (m == Metric::kDpalign) sec.alignment = dp_total;
    report.sections.push_back(std::move(sec));
  }
  return report;
}

// Threshold sweep per selected metric.
inline std::vector<DetCurve> run_det(const RunConfig& config) {
  config.validate();
  const LabelMap labels = config.make_label_map();
  const LabelId default_label = *labels.find(config.default_label);
  const MetricParams params = config.make_params();
  const PairList pairs = load_pair_list(config.pair_list_path);

  std::vector<DocPair> docs(pairs.entries.size());
  detail::parallel_for(pairs.entries.size(), config.jobs, [&](size_t i) {
    docs[i] = load_pair(pairs.entries[i], labels, default_label);
  });

  std::vector<double> thresholds;
  if (config.threshold_grid.empty()) {
    try {
      thresholds = default_thresholds(docs, labels.target_id());
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
  } else if (config.threshold_grid.rfind("uniform:", 0) == 0) {
    thresholds = uniform_thresholds(
        std::stoi(config.threshold_grid.substr(8)));
  } else {
    throw std::invalid_argument("bad threshold grid spec: " +
                                config.threshold_grid);
  }

  std::vector<DetCurve> curves;
  for (Metric m : detail::canonical_metric_order(config.metrics))
    curves.push_back(
        sweep(docs, m, params, labels, default_label, thresholds));
  return curves;
}

struct SystemSpec {
  std::string name;
  std::string hyp_root;  // empty = use pair-list paths as written
};

struct StatsReport {
  std::string text;
  Json json;
};

namespace detail {

struct PatientScores {
  // per metric: target-label sensitivity / specificity per patient
  std::map<Metric, ScoreVector> sensitivity;
  std::map<Metric, ScoreVector> specificity;
  std::vector<bool> has_detections;  // per patient: any target hyp event
  int n_excluded = 0;
};

inline ScoreVector masked(const ScoreVector& v, const std::vector<bool>& mask) {
  ScoreVector out = v;
  for (size_t i = 0; i < out.values.size(); ++i)
    if (!mask[i]) out.values[i] = std::nullopt;
  return out;
}

}  // namespace detail

// Cross-metric correlations, per-metric system comparisons, and normality
// checks over per-patient score vectors.  A patient's counts are summed
// across that patient's files before measures are derived; patients whose
// reference has no target events score an undefined sensitivity and drop
// out pairwise, and patients for which a system produced no target
// detections are excluded by the configured policy.
inline StatsReport run_stats(const RunConfig& config,
                             const std::vector<SystemSpec>& systems) {
  config.validate();
  if (systems.empty()) throw std::invalid_argument("no systems given");
  std::vector<Metric> metrics;
  for (Metric m : detail::canonical_metric_order(config.metrics))
    if (m != Metric::kIra) metrics.push_back(m);  // IRA is derived; excluded
  if (systems.size() < 2 && metrics.size() < 2)
    throw std::invalid_argument(
        "stats needs at least two systems or two metrics");

  const LabelMap labels = config.make_label_map();
  const LabelId target = labels.target_id();
  const LabelId default_label = *labels.find(config.default_label);
  const MetricParams params = config.make_params();
  const PairList pairs = load_pair_list(config.pair_list_path);

  // Canonical patient order: sorted unique ids.
  std::vector<std::string> patients;
  for (const auto& e : pairs.entries) patients.push_back(e.patient_id);
  std::sort(patients.begin(), patients.end());
  patients.erase(std::unique(patients.begin(), patients.end()),
                 patients.end());
  std::map<std::string, size_t> patient_index;
  for (size_t i = 0; i < patients.size(); ++i) patient_index[patients[i]] = i;

  std::vector<detail::PatientScores> per_system(systems.size());
  for (size_t s = 0; s < systems.size(); ++s) {
    std::vector<PairList::Entry> entries = pairs.entries;
    if (!systems[s].hyp_root.empty())
      for (auto& e : entries)
        e.hyp_path = systems[s].hyp_root + "/" + e.hyp_path;

    std::vector<detail::PairOutcome> outcomes(entries.size());
    std::vector<double> detections(entries.size(), 0.0);
    detail::parallel_for(entries.size(), config.jobs, [&](size_t i) {
      auto [ref, hyp] = load_pair(entries[i], labels, default_label);
      detail::PairOutcome o;
      o.entry = entries[i];
      std::optional<ConfusionCounts> epoch_cache;
      for (Metric m : metrics) {
        if (m == Metric::kEpoch) {
          if (!epoch_cache)
            epoch_cache = score_epoch(ref, hyp, labels, params.epoch);
          o.counts.emplace(m, *epoch_cache);
        } else {
          o.counts.emplace(m, score_with(m, ref, hyp, labels, params));
        }
      }
      for (const Event& e : hyp.events)
        if (!e.filled && e.label == target) detections[i] += 1.0;
      outcomes[i] = std::move(o);
    });

    // Per-patient accumulation, in pair-list order within each patient.
    detail::PatientScores& ps = per_system[s];
    ps.has_detections.assign(patients.size(), false);
    std::map<Metric, std::vector<ConfusionCounts>> acc;
    for (Metric m : metrics)
      acc[m].assign(patients.size(), ConfusionCounts(labels.size()));
    for (size_t i = 0; i < entries.size(); ++i) {
      size_t p = patient_index.at(entries[i].patient_id);
      if (detections[i] > 0.0) ps.has_detections[p] = true;
      for (Metric m : metrics)
        acc[m][p] = accumulate(acc[m][p], outcomes[i].counts.at(m));
    }
    for (Metric m : metrics) {
      ScoreVector sens, spec;
      sens.patients = patients;
      spec.patients = patients;
      for (size_t p = 0; p < patients.size(); ++p) {
        DerivedMeasures d = derive(acc[m][p], target);
        sens.values.push_back(d.sensitivity);
        spec.values.push_back(d.specificity);
      }
      ps.sensitivity.emplace(m, std::move(sens));
      ps.specificity.emplace(m, std::move(spec));
    }
    for (size_t p = 0; p < patients.size(); ++p)
      if (!ps.has_detections[p]) ++ps.n_excluded;
  }

  // Exclusion masks per the configured policy.
  std::vector<bool> global_mask(patients.size(), true);
  for (const auto& ps : per_system)
    for (size_t p = 0; p < patients.size(); ++p)
      if (!ps.has_detections[p]) global_mask[p] = false;
  auto mask_for = [&](size_t s) {
    return config.exclusion == ExclusionPolicy::kGlobal
               ? global_mask
               : std::vector<bool>(per_system[s].has_detections.begin(),
                                   per_system[s].has_detections.end());
  };
  auto mask_for_pair = [&](size_t a, size_t b) {
    if (config.exclusion == ExclusionPolicy::kGlobal) return global_mask;
    std::vector<bool> m(patients.size());
    for (size_t p = 0; p < patients.size(); ++p)
      m[p] = per_system[a].has_detections[p] &&
             per_system[b].has_detections[p];
    return m;
  };

  {  // hard floor on usable data
    int usable = 0;
    for (size_t p = 0; p < patients.size(); ++p) {
      bool any = false;
      for (size_t s = 0; s < systems.size(); ++s)
        if (mask_for(s)[p] &&
            per_system[s].sensitivity.at(metrics[0]).values[p])
          any = true;
      if (any) ++usable;
    }
    if (usable < 3) throw DataError("fewer than 3 usable patients");
  }

  std::ostringstream text;
  Json json;
  json["patients"] = patients;
  text << kToolName << " " << kToolVersion << " statistics report\n";
  text << "patients: " << patients.size() << "\n";
  for (size_t s = 0; s < systems.size(); ++s)
    text << "system " << systems[s].name << ": " << per_system[s].n_excluded
         << " patient(s) excluded (no target detections)\n";

  std::vector<std::string> metric_names;
  for (Metric m : metrics) metric_names.push_back(metric_name(m));

  // KS normality per (system, metric, measure).
  Json ks_json = Json::object();
  text << "\n-- KS normality (d, p) --\n";
  for (size_t s = 0; s < systems.size(); ++s) {
    Json sys_json = Json::object();
    for (Metric m : metrics) {
      for (bool use_spec : {false, true}) {
        const ScoreVector& v = use_spec ? per_system[s].specificity.at(m)
                                        : per_system[s].sensitivity.at(m);
        ScoreVector mv = detail::masked(v, mask_for(s));
        std::string key =
            metric_name(m) + std::string(use_spec ? "/spec" : "/sens");
        try {
          KsResult ks = ks_normality(mv);
          text << systems[s].name << " " << key << ": d="
               << detail::fmt_num(ks.d) << " p=" << detail::fmt_num(ks.p)
               << " (n=" << ks.n << ")\n";
          sys_json[key] = Json{{"d", ks.d}, {"p", ks.p}, {"n", ks.n}};
        } catch (const std::invalid_argument&) {
          text << systems[s].name << " " << key << ": --\n";
          sys_json[key] = nullptr;
        }
      }
    }
    ks_json[systems[s].name] = sys_json;
  }
  json["ks"] = ks_json;

  // Cross-metric correlation matrices, pooled over systems.
  for (bool use_spec : {false, true}) {
    const char* measure = use_spec ? "specificity" : "sensitivity";
    std::vector<std::vector<std::optional<PearsonResult>>> cells(
        metrics.size(),
        std::vector<std::optional<PearsonResult>>(metrics.size()));
    for (size_t i = 0; i < metrics.size(); ++i)
      for (size_t j = 0; j < metrics.size(); ++j) {
        if (i == j) continue;
        std::vector<double> xs, ys;
        for (size_t s = 0; s < systems.size(); ++s) {
          const auto& mi = use_spec
                               ? per_system[s].specificity.at(metrics[i])
                               : per_system[s].sensitivity.at(metrics[i]);
          const auto& mj = use_spec
                               ? per_system[s].specificity.at(metrics[j])
                               : per_system[s].sensitivity.at(metrics[j]);
          auto mask = mask_for(s);
          for (size_t p = 0; p < patients.size(); ++p)
            if (mask[p] && mi.values[p] && mj.values[p]) {
              xs.push_back(*mi.values[p]);
              ys.push_back(*mj.values[p]);
            }
        }
        try {
          cells[i][j] = pearson_r(xs, ys);
        } catch (const std::invalid_argument&) {
          cells[i][j] = std::nullopt;
        }
      }
    text << "\n-- metric correlation (" << measure << ") --\n"
         << render_correlation_matrix(metric_names, cells);
    Json mat = Json::object();
    for (size_t i = 0; i < metrics.size(); ++i) {
      Json row = Json::object();
      for (size_t j = 0; j < metrics.size(); ++j)
        if (i != j)
          row[metric_names[j]] =
              cells[i][j] ? Json{{"r", cells[i][j]->r},
                                 {"p", cells[i][j]->p},
                                 {"n", cells[i][j]->n}}
                          : Json(nullptr);
      mat[metric_names[i]] = row;
    }
    json[std::string("correlation_") + measure] = mat;
  }

  // Per-metric system-pair comparisons: Pearson r and two-tailed z-tests.
  if (systems.size() >= 2) {
    std::vector<std::string> system_names;
    for (const auto& s : systems) system_names.push_back(s.name);

    for (bool use_spec : {false, true}) {
      const char* measure = use_spec ? "specificity" : "sensitivity";
      Json all = Json::object();
      for (Metric m : metrics) {
        std::vector<std::vector<std::optional<PearsonResult>>> cells(
            systems.size(),
            std::vector<std::optional<PearsonResult>>(systems.size()));
        for (size_t a = 0; a < systems.size(); ++a)
          for (size_t b = 0; b < systems.size(); ++b) {
            if (a == b) continue;
            auto mask = mask_for_pair(a, b);
            const auto& va = use_spec ? per_system[a].specificity.at(m)
                                      : per_system[a].sensitivity.at(m);
            const auto& vb = use_spec ? per_system[b].specificity.at(m)
                                      : per_system[b].sensitivity.at(m);
            try {
              cells[a][b] = pearson_r(detail::masked(va, mask),
                                      detail::masked(vb, mask));
            } catch (const std::invalid_argument&) {
              cells[a][b] = std::nullopt;
            }
          }
        text << "\n-- system correlation, " << metric_name(m) << " ("
             << measure << ") --\n"
             << render_correlation_matrix(system_names, cells);
        Json grid = Json::object();
        for (size_t a = 0; a < systems.size(); ++a) {
          Json row = Json::object();
          for (size_t b = 0; b < systems.size(); ++b)
            if (a != b)
              row[system_names[b]] =
                  cells[a][b] ? Json{{"r", cells[a][b]->r},
                                     {"p", cells[a][b]->p},
                                     {"n", cells[a][b]->n}}
                              : Json(nullptr);
          grid[system_names[a]] = row;
        }
        all[metric_name(m)] = grid;
      }
      json[std::string("system_correlation_") + measure] = all;
    }
    for (bool use_spec : {false, true}) {
      const char* measure = use_spec ? "specificity" : "sensitivity";
      Json all = Json::object();
      for (Metric m : metrics) {
        std::vector<std::vector<std::optional<ZTestResult>>> cells(
            systems.size(),
            std::vector<std::optional<ZTestResult>>(systems.size()));
        std::vector<std::optional<double>> means(systems.size());
        for (size_t s = 0; s < systems.size(); ++s) {
          const auto& v = use_spec ? per_system[s].specificity.at(m)
                                   : per_system[s].sensitivity.at(m);
          auto vals = defined_values(detail::masked(v, mask_for(s)));
          if (!vals.empty()) means[s] = detail::mean_of(vals);
        }
        for (size_t a = 0; a < systems.size(); ++a)
          for (size_t b = 0; b < systems.size(); ++b) {
            if (a == b) continue;
            auto mask = mask_for_pair(a, b);
            const auto& va = use_spec ? per_system[a].specificity.at(m)
                                      : per_system[a].sensitivity.at(m);
            const auto& vb = use_spec ? per_system[b].specificity.at(m)
                                      : per_system[b].sensitivity.at(m);
            try {
              cells[a][b] = z_test(defined_values(detail::masked(va, mask)),
                                   defined_values(detail::masked(vb, mask)),
                                   config.alpha);
            } catch (const std::invalid_argument&) {
              cells[a][b] = std::nullopt;
            }
          }
        text << "\n-- z-tests, " << metric_name(m) << " (" << measure
             << ", alpha=" << config.alpha << ") --\n"
             << render_significance_grid(system_names, cells, means);
        Json grid = Json::object();
        for (size_t a = 0; a < systems.size(); ++a) {
          Json row = Json::object();
          for (size_t b = 0; b < systems.size(); ++b)
            if (a != b)
              row[system_names[b]] =
                  cells[a][b] ? Json{{"z", cells[a][b]->z},
                                     {"p", cells[a][b]->p},
                                     {"significant", cells[a][b]->significant}}
                              : Json(nullptr);
          grid[system_names[a]] = row;
        }
        all[metric_name(m)] = grid;
      }
      json[std::string("ztest_") + measure] = all;
    }
  }

  StatsReport out;
  out.text = text.str();
  out.json = std::move(json);
  return out;
}

}  // namespace evscore

#endif  // EVSCORE_RUNNER_HPP
