// tests/test_runner.cpp
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

#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"

using namespace evscore;
using Catch::Approx;

namespace {

const LabelMap kLabels = fixtures::two_class();
const LabelId kSeiz = *kLabels.find("seiz");
const LabelId kBckg = *kLabels.find("bckg");

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("evscore_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    std::filesystem::path p = path / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

// The three-isolated-events timeline as term files.
std::string summary_ref_text() {
  return "duration = 10.0 secs\n"
         "0.0000 1.0000 bckg\n"
         "1.0000 3.0000 seiz\n"
         "3.0000 4.0000 bckg\n"
         "4.0000 6.0000 seiz\n"
         "6.0000 7.0000 bckg\n"
         "7.0000 9.0000 seiz\n"
         "9.0000 10.0000 bckg\n";
}

std::string summary_hyp_text() {
  return "duration = 10.0 secs\n"
         "0.0000 2.0000 bckg\n"
         "2.0000 10.0000 seiz\n";
}

RunConfig base_config(const std::string& pairs_path) {
  RunConfig config;
  config.pair_list_path = pairs_path;
  return config;
}

}  // namespace

TEST_CASE("run_score reproduces the summary-fixture numbers end to end") {
  TempDir dir("score");
  std::string ref = dir.file("ref/a.ann", summary_ref_text());
  std::string hyp = dir.file("hyp/a.ann", summary_hyp_text());
  std::string pairs = dir.file("pairs.txt", ref + " " + hyp + " p001\n");

  RunConfig config = base_config(pairs);
  config.epoch_duration = 1.0;
  MetricReport report = run_score(config);
  REQUIRE(report.sections.size() == 6);

  auto section = [&](Metric m) -> const MetricSection& {
    for (const auto& s : report.sections)
      if (s.metric == m) return s;
    FAIL("missing section");
    return report.sections[0];
  };

  const MetricSection& epoch = section(Metric::kEpoch);
  CHECK(epoch.corpus.per_label[kSeiz].tp == 5.0);
  CHECK(epoch.corpus.per_label[kSeiz].fp == 3.0);
  CHECK(epoch.corpus.per_label[kSeiz].fn == 1.0);
  CHECK(epoch.corpus.per_label[kSeiz].tn == 1.0);
  auto kappa_val = derive(epoch.corpus, kSeiz).kappa;
  REQUIRE(kappa_val);
  CHECK(*kappa_val == Approx(0.0909).margin(0.0005));

  const MetricSection& ovlp = section(Metric::kOvlp);
  CHECK(*derive(ovlp.corpus, kSeiz).sensitivity == 1.0);
  CHECK(ovlp.corpus.per_label[kSeiz].fp == 0.0);

  const MetricSection& atwv = section(Metric::kAtwv);
  REQUIRE(atwv.atwv);
  CHECK(*atwv.atwv->atwv == Approx(0.29).margin(0.01));
  CHECK(*atwv.atwv->twv[kSeiz] == Approx(1.0 / 3.0));
  CHECK(*atwv.atwv->twv[kBckg] == Approx(0.25));

  const MetricSection& dpalign = section(Metric::kDpalign);
  CHECK(dpalign.corpus.per_label[kSeiz].tp == 1.0);
  CHECK(dpalign.corpus.per_label[kSeiz].fn == 2.0);

  const MetricSection& ira = section(Metric::kIra);
  auto ira_kappa = derive(ira.corpus, kSeiz).kappa;
  REQUIRE(ira_kappa);
  CHECK(*ira_kappa == Approx(0.0909).margin(0.0005));
}

TEST_CASE("a hypothesis equal to the reference is perfect under every metric") {
  TempDir dir("perfect");
  std::string ref1 = dir.file("r1.ann", summary_ref_text());
  std::string ref2 = dir.file(
      "r2.ann", "0.0 4.0 bckg\n4.0 6.0 seiz\n6.0 12.0 bckg\n");
  std::string pairs = dir.file(
      "pairs.txt", ref1 + " " + ref1 + " p001\n" + ref2 + " " + ref2 +
                       " p002\n");

  MetricReport report = run_score(base_config(pairs));
  for (const auto& sec : report.sections) {
    DerivedMeasures m = derive(sec.corpus, kSeiz);
    INFO("metric " << metric_name(sec.metric));
    CHECK(*m.sensitivity == 1.0);
    CHECK(*m.specificity == 1.0);
    CHECK(*m.fa_per_24h == 0.0);
    CHECK(*m.kappa == 1.0);
  }
}

TEST_CASE("reports are byte-identical across worker counts") {
  TempDir dir("determinism");
  std::mt19937 rng(81);
  std::ostringstream pairs;
  for (int i = 0; i < 100; ++i) {
    AnnotationDoc ref = fixtures::random_event_doc(rng, kLabels, 100.0);
    AnnotationDoc hyp =
        fixtures::random_event_doc(rng, kLabels, 100.0, /*with_conf=*/true);
    ref.duration = 100.0;
    hyp.duration = 100.0;
    std::string rp = dir.file("ref" + std::to_string(i) + ".ann",
                              serialize_annotation(ref, kLabels));
    std::string hp = dir.file("hyp" + std::to_string(i) + ".ann",
                              serialize_annotation(hyp, kLabels));
    pairs << rp << " " << hp << " p" << i % 7 << "\n";
  }
  std::string pairs_path = dir.file("pairs.txt", pairs.str());

  RunConfig config = base_config(pairs_path);
  config.jobs = 1;
  std::string serial = report_to_json(run_score(config), kLabels).dump(2);
  config.jobs = 4;
  std::string parallel = report_to_json(run_score(config), kLabels).dump(2);
  config.jobs = 0;  // hardware concurrency
  std::string autojobs = report_to_json(run_score(config), kLabels).dump(2);
  CHECK(serial == parallel);
  CHECK(serial == autojobs);
}

TEST_CASE("machine-readable reports round-trip to the printed ratios") {
  TempDir dir("roundtrip");
  std::string ref = dir.file("ref.ann", summary_ref_text());
  std::string hyp = dir.file("hyp.ann", summary_hyp_text());
  std::string pairs = dir.file("pairs.txt", ref + " " + hyp + " p001\n");

  RunConfig config = base_config(pairs);
  config.epoch_duration = 1.0;
  MetricReport report = run_score(config);
  Json j = report_to_json(report, kLabels);
  Json parsed = Json::parse(j.dump(2));

  for (const auto& sec : report.sections) {
    const Json& mj = parsed.at("metrics").at(metric_name(sec.metric));
    ConfusionCounts corpus = counts_from_json(mj.at("corpus"), kLabels);
    for (LabelId l = 0; l < kLabels.size(); ++l) {
      DerivedMeasures want = derive(sec.corpus, l);
      DerivedMeasures got = derive(corpus, l);
      const Json& dj =
          mj.at("corpus").at("labels").at(kLabels.name(l)).at("derived");
      if (want.sensitivity) {
        CHECK(std::abs(*got.sensitivity - *want.sensitivity) < 1e-9);
        CHECK(std::abs(dj.at("sensitivity").get<double>() -
                       *want.sensitivity) < 1e-9);
      }
      if (want.kappa)
        CHECK(std::abs(*got.kappa - *want.kappa) < 1e-9);
    }
  }
}

TEST_CASE("report ordering is canonical regardless of input order") {
  TempDir dir("ordering");
  std::string ra = dir.file("a_ref.ann", "0.0 2.0 seiz\n2.0 5.0 bckg\n");
  std::string rb = dir.file("b_ref.ann", "0.0 2.0 seiz\n2.0 5.0 bckg\n");
  std::string h = dir.file("hyp.ann", "0.0 2.0 seiz\n2.0 5.0 bckg\n");
  std::string pairs =
      dir.file("pairs.txt", rb + " " + h + " p2\n" + ra + " " + h + " p1\n");

  RunConfig config = base_config(pairs);
  config.metrics = {Metric::kTaes, Metric::kEpoch};  // not in name order
  MetricReport report = run_score(config);
  REQUIRE(report.sections.size() == 2);
  CHECK(report.sections[0].metric == Metric::kEpoch);
  CHECK(report.sections[1].metric == Metric::kTaes);
  REQUIRE(report.sections[0].files.size() == 2);
  CHECK(report.sections[0].files[0].ref_path == ra);
  CHECK(report.sections[0].files[1].ref_path == rb);
}

TEST_CASE("alignment printouts can be included in the text report") {
  TempDir dir("align");
  std::string ref = dir.file("ref.ann", summary_ref_text());
  std::string hyp = dir.file("hyp.ann", summary_hyp_text());
  std::string pairs = dir.file("pairs.txt", ref + " " + hyp + " p001\n");

  RunConfig config = base_config(pairs);
  config.metrics = {Metric::kDpalign};
  config.emit_alignments = true;
  MetricReport report = run_score(config);
  std::string text = report_to_text(report, kLabels);
  CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                       "Ref: bckg seiz BCKG SEIZ BCKG SEIZ BCKG\n"
                       "Hyp: bckg seiz **** **** **** **** ****\n"));
  CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                       "(Hits: 2 Sub: 0 Ins: 0 Del: 5"));

  config.emit_alignments = false;
  std::string plain = report_to_text(run_score(config), kLabels);
  CHECK_THAT(plain,
             !Catch::Matchers::ContainsSubstring("Ref: bckg seiz"));
}

TEST_CASE("run_det produces one curve per metric with exact operating points") {
  TempDir dir("det");
  std::string ref = dir.file("ref.ann",
                             "0.0 2.0 seiz\n2.0 4.0 bckg\n4.0 6.0 seiz\n");
  std::string hyp = dir.file("hyp.ann",
                             "0.0 2.0 seiz 0.9\n2.0 4.0 seiz 0.3\n"
                             "4.0 6.0 seiz 0.8\n");
  std::string pairs = dir.file("pairs.txt", ref + " " + hyp + " p001\n");

  RunConfig config = base_config(pairs);
  config.metrics = {Metric::kOvlp};
  std::vector<DetCurve> curves = run_det(config);
  REQUIRE(curves.size() == 1);
  REQUIRE(curves[0].points.size() == 3);  // thresholds 0.3, 0.8, 0.9
  CHECK(curves[0].points[0].threshold == 0.3);
  CHECK(curves[0].points[0].fn_rate == 0.0);
  CHECK(curves[0].points[2].fn_rate == Approx(0.5));
  CHECK(curves[0].points[2].fp_rate == 0.0);
}

TEST_CASE("run_det requires confidences") {
  TempDir dir("detnoconf");
  std::string ref = dir.file("ref.ann", "0.0 2.0 seiz\n2.0 4.0 bckg\n");
  std::string hyp = dir.file("hyp.ann", "0.0 2.0 seiz\n");
  std::string pairs = dir.file("pairs.txt", ref + " " + hyp + " p001\n");
  RunConfig config = base_config(pairs);
  CHECK_THROWS_AS(run_det(config), DataError);
}

TEST_CASE("run_stats on two identical systems") {
  TempDir dir("stats");
  // Four patients with varying coverage so the score vectors have variance
  // under every metric; p4 detects only a spurious event, so even binary
  // event sensitivity varies.
  struct P {
    const char* id;
    const char* hyp_line;
  };
  std::vector<P> ps = {{"p1", "2.0 6.0 seiz\n"},
                       {"p2", "2.0 4.0 seiz\n"},
                       {"p3", "3.0 6.0 seiz\n"},
                       {"p4", "10.0 12.0 seiz\n"}};
  std::ostringstream pairs;
  for (const P& p : ps) {
    std::string ref = dir.file(std::string("ref_") + p.id + ".ann",
                               "duration = 20.0 secs\n2.0 6.0 seiz\n");
    dir.file(std::string("sysA/hyp_") + p.id + ".ann",
             std::string("duration = 20.0 secs\n") + p.hyp_line);
    dir.file(std::string("sysB/hyp_") + p.id + ".ann",
             std::string("duration = 20.0 secs\n") + p.hyp_line);
    pairs << ref << " hyp_" << p.id << ".ann " << p.id << "\n";
  }
  std::string pairs_path = dir.file("pairs.txt", pairs.str());

  RunConfig config = base_config(pairs_path);
  config.metrics = {Metric::kEpoch, Metric::kOvlp, Metric::kTaes};
  std::vector<SystemSpec> systems = {
      {"A", (dir.path / "sysA").string()},
      {"B", (dir.path / "sysB").string()},
  };
  StatsReport report = run_stats(config, systems);

  for (const auto& metric : {"epoch", "ovlp", "taes"}) {
    const Json& grid = report.json.at("ztest_sensitivity").at(metric);
    double z = grid.at("A").at("B").at("z").get<double>();
    CHECK(z == 0.0);
    CHECK_FALSE(grid.at("A").at("B").at("significant").get<bool>());
    const Json& corr =
        report.json.at("system_correlation_sensitivity").at(metric);
    CHECK(corr.at("A").at("B").at("r").get<double>() == Approx(1.0));
  }
}

TEST_CASE("run_stats builds a metric-pair matrix excluding the derived metric") {
  TempDir dir("statsmat");
  std::mt19937 rng(82);
  std::ostringstream pairs;
  for (int i = 0; i < 8; ++i) {
    AnnotationDoc ref = fixtures::random_event_doc(rng, kLabels, 60.0);
    AnnotationDoc hyp = fixtures::random_event_doc(rng, kLabels, 60.0);
    if (ref.events.empty() || hyp.events.empty()) {
      --i;
      continue;
    }
    std::string rp = dir.file("ref" + std::to_string(i) + ".ann",
                              serialize_annotation(ref, kLabels));
    std::string hp = dir.file("hyp" + std::to_string(i) + ".ann",
                              serialize_annotation(hyp, kLabels));
    pairs << rp << " " << hp << " p" << i << "\n";
  }
  std::string pairs_path = dir.file("pairs.txt", pairs.str());

  RunConfig config = base_config(pairs_path);  // all six metrics
  StatsReport report = run_stats(config, {{"sys", ""}});
  const Json& corr = report.json.at("correlation_sensitivity");
  REQUIRE(corr.size() == 5);
  CHECK_FALSE(corr.contains("ira"));
  for (const auto& [name, row] : corr.items()) CHECK(row.size() == 4);
}

TEST_CASE("run_stats reports no-detection exclusions") {
  TempDir dir("statsexcl");
  std::ostringstream pairs;
  for (int i = 0; i < 4; ++i) {
    std::string id = "p" + std::to_string(i);
    std::string ref = dir.file("ref_" + id + ".ann",
                               "duration = 20.0 secs\n2.0 6.0 seiz\n");
    std::string hyp_line = i == 3 ? std::string("0.0 20.0 bckg\n")
                                  : "2.0 " + std::to_string(3 + i) +
                                        ".0 seiz\n";
    std::string hyp = dir.file("hyp_" + id + ".ann",
                               "duration = 20.0 secs\n" + hyp_line);
    pairs << ref << " " << hyp << " " << id << "\n";
  }
  std::string pairs_path = dir.file("pairs.txt", pairs.str());

  RunConfig config = base_config(pairs_path);
  config.metrics = {Metric::kOvlp, Metric::kTaes};
  StatsReport report = run_stats(config, {{"sys", ""}});
  CHECK_THAT(report.text, Catch::Matchers::ContainsSubstring(
                              "1 patient(s) excluded"));
}

TEST_CASE("run_stats needs at least three usable patients") {
  TempDir dir("statsfew");
  std::ostringstream pairs;
  for (int i = 0; i < 2; ++i) {
    std::string id = "p" + std::to_string(i);
    std::string ref = dir.file("ref_" + id + ".ann", "2.0 6.0 seiz\n");
    std::string hyp = dir.file("hyp_" + id + ".ann", "2.0 5.0 seiz\n");
    pairs << ref << " " << hyp << " " << id << "\n";
  }
  RunConfig config = base_config(dir.file("pairs.txt", pairs.str()));
  config.metrics = {Metric::kOvlp, Metric::kTaes};
  CHECK_THROWS_AS(run_stats(config, {{"sys", ""}}), DataError);
}

TEST_CASE("error mapping: missing files and bad configs") {
  TempDir dir("errors");
  RunConfig config = base_config((dir.path / "nope.txt").string());
  CHECK_THROWS_AS(run_score(config), DataError);

  std::string ref = dir.file("ref.ann", "0.0 2.0 seiz\n");
  std::string pairs = dir.file("pairs.txt",
                               ref + " " + (dir.path / "missing.ann").string() +
                                   " p1\n");
  config = base_config(pairs);
  CHECK_THROWS_AS(run_score(config), DataError);

  std::string bad = dir.file("bad.ann", "5.0 4.0 seiz\n");
  pairs = dir.file("pairs2.txt", bad + " " + ref + " p1\n");
  config = base_config(pairs);
  CHECK_THROWS_AS(run_score(config), ParseError);

  config = base_config(pairs);
  config.metrics = {};
  CHECK_THROWS_AS(run_score(config), std::invalid_argument);
  config = base_config(pairs);
  config.epoch_duration = -1.0;
  CHECK_THROWS_AS(run_score(config), std::invalid_argument);
  config = base_config(pairs);
  config.default_label = "nope";
  CHECK_THROWS_AS(run_score(config), std::invalid_argument);
}
