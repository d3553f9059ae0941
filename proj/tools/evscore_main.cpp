// tools/evscore_main.cpp
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

// Batch scorer for event-detection hypotheses against reference annotations.
//
// Subcommands:
//   score   confusion counts and derived measures per metric
//   det     threshold sweeps producing DET/ROC points and AUC
//   stats   per-patient KS / Pearson / z-test grids across systems
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evscore/evscore.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void add_common_options(CLI::App* cmd, evscore::RunConfig* config,
                        std::vector<std::string>* metric_names) {
  cmd->add_option("pairs", config->pair_list_path,
                  "pair-list file: 'ref_path hyp_path patient_id' per line")
      ->required();
  cmd->add_option("--metrics", *metric_names,
                  "comma-separated subset of "
                  "atwv,dpalign,epoch,ovlp,taes,ira")
      ->delimiter(',');
  cmd->add_option("--labels", config->label_names,
                  "comma-separated label set (default seiz,bckg)")
      ->delimiter(',');
  cmd->add_option("--target-label", config->target_label,
                  "positive class (default seiz)");
  cmd->add_option("--default-label", config->default_label,
                  "label used to fill unannotated gaps (default bckg)");
  cmd->add_option("--epoch-duration", config->epoch_duration,
                  "epoch scoring period in seconds (default 0.25)");
  cmd->add_option("--guard-band", config->guard_band,
                  "overlap tolerance in seconds (default 0)");
  cmd->add_option("--beta", config->beta,
                  "false-alarm penalty weight (default 999.9)");
  cmd->add_option("--theta", config->theta,
                  "detection threshold in [0,1] (default 0)");
  cmd->add_option("--jobs", config->jobs,
                  "worker threads; 0 = hardware concurrency (default 1)");
  std::map<std::string, evscore::TaesMultiRefPolicy> policies{
      {"first-only", evscore::TaesMultiRefPolicy::kFirstOnly},
      {"credit-all", evscore::TaesMultiRefPolicy::kCreditAll}};
  cmd->add_option("--taes-policy", config->taes_policy,
                  "multi-reference policy: first-only|credit-all")
      ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
}

std::vector<evscore::Metric> resolve_metrics(
    const std::vector<std::string>& names) {
  if (names.empty()) return evscore::all_metrics();
  std::vector<evscore::Metric> out;
  for (const auto& n : names) {
    auto m = evscore::metric_from_name(n);
    if (!m) throw std::invalid_argument("unknown metric: " + n);
    out.push_back(*m);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw evscore::DataError("cannot write output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evscore: time-aligned event detection scoring"};
  app.require_subcommand(1);

  evscore::RunConfig config;
  std::vector<std::string> metric_names;
  std::string out_prefix;

  CLI::App* score = app.add_subcommand("score", "score a pair list");
  add_common_options(score, &config, &metric_names);
  score->add_option("--out", out_prefix,
                    "output prefix; writes <out>.txt and <out>.json");
  score->add_flag("--print-alignments", config.emit_alignments,
                  "print each pair's label-sequence alignment");

  CLI::App* det = app.add_subcommand("det", "threshold sweep / DET curves");
  add_common_options(det, &config, &metric_names);
  det->add_option("--out", out_prefix,
                  "output prefix; writes <out>.<metric>.txt and .json");
  det->add_option("--threshold-grid", config.threshold_grid,
                  "'uniform:<n>' for a uniform grid; default: the distinct "
                  "hypothesis confidences");

  CLI::App* stats = app.add_subcommand("stats", "cross-system statistics");
  add_common_options(stats, &config, &metric_names);
  std::vector<std::string> system_specs;
  stats->add_option("--system", system_specs,
                    "system as name=hyp_root (repeatable); hyp paths in the "
                    "pair list are resolved under hyp_root")
      ->expected(-1);
  stats->add_option("--alpha", config.alpha,
                    "z-test significance level (default 0.05)");
  std::map<std::string, evscore::ExclusionPolicy> policies{
      {"per-pair", evscore::ExclusionPolicy::kPerPair},
      {"global", evscore::ExclusionPolicy::kGlobal}};
  stats->add_option("--exclusion", config.exclusion,
                    "no-detection patient exclusion: per-pair|global")
      ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
  stats->add_option("--out", out_prefix,
                    "output prefix; writes <out>.txt and <out>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.metrics = resolve_metrics(metric_names);

    if (score->parsed()) {
      evscore::MetricReport report = evscore::run_score(config);
      evscore::LabelMap labels = config.make_label_map();
      std::string text = evscore::report_to_text(report, labels);
      std::cout << text;
      if (!out_prefix.empty()) {
        write_file(out_prefix + ".txt", text);
        write_file(out_prefix + ".json",
                   evscore::report_to_json(report, labels).dump(2) + "\n");
      }
    } else if (det->parsed()) {
      std::vector<evscore::DetCurve> curves = evscore::run_det(config);
      for (const auto& curve : curves) {
        std::string text = evscore::curve_to_text(curve);
        std::cout << text;
        if (!out_prefix.empty()) {
          std::string base =
              out_prefix + "." + evscore::metric_name(curve.metric);
          write_file(base + ".txt", text);
          write_file(base + ".json",
                     evscore::curve_to_json(curve).dump(2) + "\n");
        }
      }
    } else if (stats->parsed()) {
      std::vector<evscore::SystemSpec> systems;
      for (const auto& spec : system_specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("--system expects name=hyp_root, got '" +
                                      spec + "'");
        systems.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
      }
      if (systems.empty()) systems.push_back({"system", ""});
      evscore::StatsReport report = evscore::run_stats(config, systems);
      std::cout << report.text;
      if (!out_prefix.empty()) {
        write_file(out_prefix + ".txt", report.text);
        write_file(out_prefix + ".json", report.json.dump(2) + "\n");
      }
    }
  } catch (const evscore::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const evscore::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
