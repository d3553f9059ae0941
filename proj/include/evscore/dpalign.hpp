// evscore/dpalign.hpp
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

#ifndef EVSCORE_DPALIGN_HPP
#define EVSCORE_DPALIGN_HPP

// Time-ignorant label-sequence alignment by minimum edit distance
// (Levenshtein, unit substitution/insertion/deletion costs).  The recovered
// path is deterministic: among cost-equal moves the trace prefers
// hit > substitution > deletion > insertion, scanning the sequences
// front-to-back, which keeps unmatched trailing symbols at the end of the
// printed alignment.

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "evscore/annot.hpp"
#include "evscore/counts.hpp"

namespace evscore {

constexpr LabelId kGap = -1;

struct Alignment {
  struct Pair {
    LabelId ref_slot = kGap;  // kGap marks an insertion
    LabelId hyp_slot = kGap;  // kGap marks a deletion
  };
  std::vector<Pair> pairs;
  int hits = 0;
  int subs = 0;
  int ins = 0;
  int dels = 0;

  int total_errors() const { return subs + ins + dels; }
};

// Optimal alignment of two label sequences under unit edit costs.
inline Alignment align(const std::vector<LabelId>& ref_seq,
                       const std::vector<LabelId>& hyp_seq) {
  const size_t n = ref_seq.size(), m = hyp_seq.size();
  // d[i][j] = edit distance between ref_seq[i..n) and hyp_seq[j..m), so the
  // path can be traced forward from (0,0).
  std::vector<int> d((n + 1) * (m + 1), 0);
  auto at = [&](size_t i, size_t j) -> int& { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, m) = static_cast<int>(n - i);
  for (size_t j = 0; j <= m; ++j) at(n, j) = static_cast<int>(m - j);
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;) {
      int sub = at(i + 1, j + 1) + (ref_seq[i] == hyp_seq[j] ? 0 : 1);
      int del = at(i + 1, j) + 1;
      int ins = at(i, j + 1) + 1;
      at(i, j) = std::min({sub, del, ins});
    }

  Alignment out;
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    int here = at(i, j);
    if (i < n && j < m && ref_seq[i] == hyp_seq[j] &&
        here == at(i + 1, j + 1)) {
      out.pairs.push_back({ref_seq[i], hyp_seq[j]});
      ++out.hits;
      ++i, ++j;
    } else if (i < n && j < m && here == at(i + 1, j + 1) + 1) {
      out.pairs.push_back({ref_seq[i], hyp_seq[j]});
      ++out.subs;
      ++i, ++j;
    } else if (i < n && here == at(i + 1, j) + 1) {
      out.pairs.push_back({ref_seq[i], kGap});
      ++out.dels;
      ++i;
    } else {
      assert(j < m && here == at(i, j + 1) + 1);
      out.pairs.push_back({kGap, hyp_seq[j]});
      ++out.ins;
      ++j;
    }
  }
  return out;
}

// Label sequence of a doc: one token per maximal constant-label segment,
// i.e. consecutive same-label events collapse into a single term.
inline std::vector<LabelId> label_sequence(const AnnotationDoc& doc) {
  std::vector<LabelId> seq;
  for (const Event& e : doc.events)
    if (seq.empty() || seq.back() != e.label) seq.push_back(e.label);
  return seq;
}

// Converts an alignment into per-label confusion tallies: a hit is a TP for
// its label, a deletion a miss, an insertion a false alarm, and a
// substitution both a miss of the reference label and a false alarm of the
// hypothesis label.
inline ConfusionCounts score_dpalign(const AnnotationDoc& ref,
                                     const AnnotationDoc& hyp,
                                     const LabelMap& labels) {
  const int k = labels.size();
  ConfusionCounts counts(k);
  counts.total_duration = ref.duration;
  for (const Event& e : ref.events) counts.n_ref_events[e.label] += 1.0;
  for (const Event& e : hyp.events) counts.n_hyp_events[e.label] += 1.0;

  Alignment ali = align(label_sequence(ref), label_sequence(hyp));
  std::vector<double> hits(k, 0.0);
  for (const auto& p : ali.pairs) {
    if (p.ref_slot != kGap && p.ref_slot == p.hyp_slot) {
      counts.per_label[p.ref_slot].tp += 1.0;
      hits[p.ref_slot] += 1.0;
    } else {
      if (p.ref_slot != kGap) counts.per_label[p.ref_slot].fn += 1.0;
      if (p.hyp_slot != kGap) counts.per_label[p.hyp_slot].fp += 1.0;
    }
  }
  for (int l = 0; l < k; ++l)
    for (int o = 0; o < k; ++o)
      if (o != l) counts.per_label[l].tn += hits[o];
  return counts;
}

// Renders an alignment in the two-row text layout: lowercase for correct
// tokens, uppercase for errors, '*' runs for gaps, plus a summary line.
inline std::string format_alignment(const Alignment& ali,
                                    const LabelMap& labels) {
  auto upper = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };

  std::vector<std::string> ref_toks, hyp_toks;
  for (const auto& p : ali.pairs) {
    bool hit = p.ref_slot != kGap && p.ref_slot == p.hyp_slot;
    std::string r = p.ref_slot == kGap ? "" : labels.name(p.ref_slot);
    std::string h = p.hyp_slot == kGap ? "" : labels.name(p.hyp_slot);
    size_t width = std::max<size_t>({r.size(), h.size(), 1});
    if (p.ref_slot == kGap) r = std::string(width, '*');
    else r = hit ? lower(r) : upper(r);
    if (p.hyp_slot == kGap) h = std::string(width, '*');
    else h = hit ? lower(h) : upper(h);
    r.resize(std::max(r.size(), h.size()), ' ');
    h.resize(r.size(), ' ');
    ref_toks.push_back(r);
    hyp_toks.push_back(h);
  }

  std::ostringstream os;
  os << "Ref:";
  for (const auto& t : ref_toks) os << ' ' << t;
  os << "\nHyp:";
  for (const auto& t : hyp_toks) os << ' ' << t;
  os << "\n(Hits: " << ali.hits << " Sub: " << ali.subs << " Ins: " << ali.ins
     << " Del: " << ali.dels << " Total Errors: " << ali.total_errors()
     << ")\n";
  return os.str();
}

}  // namespace evscore

#endif  // EVSCORE_DPALIGN_HPP
