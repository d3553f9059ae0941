// tests/test_annot.cpp
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

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace evscore;

namespace {
const LabelMap kLabels = fixtures::two_class();
const LabelId kSeiz = *kLabels.find("seiz");
const LabelId kBckg = *kLabels.find("bckg");
}  // namespace

TEST_CASE("label map validation") {
  REQUIRE_THROWS_AS(LabelMap({Label{"seiz", true}, Label{"spsw", true}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(LabelMap({Label{"seiz", false}}), std::invalid_argument);
  REQUIRE_THROWS_AS(LabelMap({Label{"a b", true}}), std::invalid_argument);
  REQUIRE_THROWS_AS(LabelMap::from_names({"seiz", "seiz"}, "seiz"),
                    std::invalid_argument);
  REQUIRE(kLabels.target_id() == kSeiz);
}

TEST_CASE("parse a well-formed line") {
  AnnotationDoc doc = parse_annotation("0.0000 10.0000 bckg 1.0000\n", kLabels);
  REQUIRE(doc.events.size() == 1);
  CHECK(doc.events[0].start == 0.0);
  CHECK(doc.events[0].stop == 10.0);
  CHECK(doc.events[0].label == kBckg);
  CHECK(doc.events[0].confidence == 1.0);
  CHECK(doc.events[0].has_confidence);
  CHECK(doc.duration == 10.0);
}

TEST_CASE("parse honors comments, blank lines, and the duration header") {
  AnnotationDoc doc = parse_annotation(
      "# a comment\n"
      "\n"
      "duration = 20.0 secs\n"
      "1.0 2.5 seiz   # trailing comment\n",
      kLabels);
  REQUIRE(doc.events.size() == 1);
  CHECK(doc.duration == 20.0);
  CHECK_FALSE(doc.events[0].has_confidence);
  CHECK(doc.events[0].confidence == 1.0);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_annotation("0 5 seiz\n4 8 seiz\n", kLabels, "x.ann");
    FAIL("expected overlap error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("overlap"));
  }

  CHECK_THROWS_AS(parse_annotation("0 5 nope\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("5 5 seiz\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("5 4 seiz\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("1 2 seiz 1.5\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("1 2\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("a 2 seiz\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("duration = x secs\n", kLabels), ParseError);
  CHECK_THROWS_AS(parse_annotation("duration = 3 secs\n0 5 seiz\n", kLabels),
                  ParseError);
}

TEST_CASE("events are sorted on return") {
  AnnotationDoc doc = parse_annotation("5 8 seiz\n0 2 bckg\n", kLabels);
  REQUIRE(doc.events.size() == 2);
  CHECK(doc.events[0].start == 0.0);
  CHECK(doc.events[1].start == 5.0);
}

TEST_CASE("fill_gaps tiles the timeline") {
  AnnotationDoc doc = fixtures::make_doc(10.0, {{2, 4, "seiz"}}, kLabels);
  AnnotationDoc filled = fill_gaps(doc, kBckg);
  REQUIRE(filled.events.size() == 3);
  CHECK(filled.events[0].start == 0.0);
  CHECK(filled.events[0].stop == 2.0);
  CHECK(filled.events[0].label == kBckg);
  CHECK(filled.events[0].filled);
  CHECK_FALSE(filled.events[1].filled);
  CHECK(filled.events[2].stop == 10.0);
  CHECK(filled.is_tiled());
}

TEST_CASE("fill_gaps is the identity on tiled docs") {
  auto [ref, hyp] = fixtures::long_hyp_over_three_refs(kLabels);
  AnnotationDoc again = fill_gaps(ref, kBckg);
  REQUIRE(again.events.size() == ref.events.size());
  for (size_t i = 0; i < ref.events.size(); ++i) {
    CHECK(again.events[i].start == ref.events[i].start);
    CHECK(again.events[i].stop == ref.events[i].stop);
    CHECK(again.events[i].label == ref.events[i].label);
  }
}

TEST_CASE("fill_gaps on an empty doc yields one default event") {
  AnnotationDoc doc;
  doc.duration = 10.0;
  AnnotationDoc filled = fill_gaps(doc, kBckg);
  REQUIRE(filled.events.size() == 1);
  CHECK(filled.events[0].start == 0.0);
  CHECK(filled.events[0].stop == 10.0);
  CHECK(filled.events[0].label == kBckg);
}

TEST_CASE("tiled docs sum their event durations to the total") {
  std::mt19937 rng(20260811);
  for (int trial = 0; trial < 50; ++trial) {
    AnnotationDoc doc = fixtures::random_event_doc(rng, kLabels, 500.0);
    AnnotationDoc filled = fill_gaps(doc, kBckg);
    REQUIRE(filled.is_tiled());
    double sum = 0.0;
    for (const Event& e : filled.events) sum += e.duration();
    CHECK(std::abs(sum - filled.duration) < 1e-9);
  }
}

TEST_CASE("serialize/parse round-trip") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    AnnotationDoc doc =
        fixtures::random_event_doc(rng, kLabels, 200.0, /*with_conf=*/true);
    AnnotationDoc back = parse_annotation(serialize_annotation(doc, kLabels),
                                          kLabels);
    REQUIRE(back.events.size() == doc.events.size());
    CHECK(back.duration == doc.duration);
    for (size_t i = 0; i < doc.events.size(); ++i) {
      CHECK(back.events[i].start == doc.events[i].start);
      CHECK(back.events[i].stop == doc.events[i].stop);
      CHECK(back.events[i].label == doc.events[i].label);
      CHECK(back.events[i].confidence == doc.events[i].confidence);
    }
  }
}

TEST_CASE("label_at respects half-open intervals") {
  auto [ref, hyp] = fixtures::long_hyp_over_three_refs(kLabels);
  CHECK(label_at(ref, 0.0) == kBckg);
  CHECK(label_at(ref, 1.0) == kSeiz);  // boundary belongs to the right event
  CHECK(label_at(ref, 3.0) == kBckg);
  CHECK(label_at(ref, 9.999) == kBckg);
}

TEST_CASE("pair list parsing") {
  PairList pl = parse_pair_list(
      "# pairs\n"
      "ref/a.ann hyp/a.ann p001\n"
      "ref/b.ann hyp/b.ann p002\n");
  REQUIRE(pl.entries.size() == 2);
  CHECK(pl.entries[0].ref_path == "ref/a.ann");
  CHECK(pl.entries[0].patient_id == "p001");

  CHECK(parse_pair_list("").entries.empty());

  try {
    parse_pair_list("ref.ann hyp.ann\n", "pairs.txt");
    FAIL("expected field-count error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }

  CHECK_THROWS_AS(
      parse_pair_list("r.ann h.ann p1\nr.ann h.ann p2\n"), ParseError);
}
