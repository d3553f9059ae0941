// evscore/annot.hpp
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

#ifndef EVSCORE_ANNOT_HPP
#define EVSCORE_ANNOT_HPP

// Data model and file I/O for timeline annotations.
//
// An annotation ("term file") describes one recording as a list of labeled
// time intervals.  Format, one event per line:
//
//     # comment
//     duration = 600.0000 secs      (optional header)
//     <start> <stop> <label> [confidence]
//
// Times are decimal seconds.  Intervals are half-open [start, stop) so that
// a gap-free annotation tiles [0, duration] without double-counting boundary
// instants.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evscore {

// Error raised by parsers; carries the source path (possibly empty) and the
// 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, int line, const std::string& msg)
      : std::runtime_error(format_message(path, line, msg)),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  static std::string format_message(const std::string& path, int line,
                                    const std::string& msg) {
    std::ostringstream os;
    if (!path.empty()) os << path << ":";
    if (line > 0) os << line << ": ";
    else if (!path.empty()) os << " ";
    os << msg;
    return os.str();
  }

  std::string path_;
  int line_;
};

using LabelId = int;

struct Label {
  std::string name;     // short token, e.g. "seiz", "bckg"
  bool target = false;  // marks the positive class
};

// Closed set of labels a run scores against.  Exactly one label is the
// target (positive) class; ids are indices into the set.
class LabelMap {
 public:
  LabelMap() = default;

  explicit LabelMap(std::vector<Label> labels) : labels_(std::move(labels)) {
    int n_target = 0;
    for (const auto& l : labels_) {
      if (l.name.empty())
        throw std::invalid_argument("label name must be non-empty");
      for (char c : l.name)
        if (std::isspace(static_cast<unsigned char>(c)))
          throw std::invalid_argument("label name contains whitespace: '" +
                                      l.name + "'");
      if (l.target) ++n_target;
    }
    if (n_target != 1)
      throw std::invalid_argument("label map must have exactly one target");
    for (size_t i = 0; i < labels_.size(); ++i)
      for (size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i].name == labels_[j].name)
          throw std::invalid_argument("duplicate label: " + labels_[i].name);
  }

  // Convenience: "seiz,bckg" style list plus the target name.
  static LabelMap from_names(const std::vector<std::string>& names,
                             const std::string& target) {
    std::vector<Label> labels;
    labels.reserve(names.size());
    bool seen = false;
    for (const auto& n : names) {
      labels.push_back(Label{n, n == target});
      seen = seen || n == target;
    }
    if (!seen)
      throw std::invalid_argument("target label '" + target +
                                  "' not in label list");
    return LabelMap(std::move(labels));
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const Label& label(LabelId id) const { return labels_.at(id); }
  const std::string& name(LabelId id) const { return labels_.at(id).name; }

  std::optional<LabelId> find(std::string_view name) const {
    for (size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i].name == name) return static_cast<LabelId>(i);
    return std::nullopt;
  }

  LabelId target_id() const {
    for (size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i].target) return static_cast<LabelId>(i);
    throw std::logic_error("label map has no target");
  }

 private:
  std::vector<Label> labels_;
};

struct Event {
  double start = 0.0;  // seconds
  double stop = 0.0;   // seconds, stop > start
  LabelId label = 0;
  double confidence = 1.0;      // detection score in [0,1]
  bool has_confidence = false;  // false when the file omitted the field
  bool filled = false;          // synthesized by fill_gaps, not system output

  double midpoint() const { return 0.5 * (start + stop); }
  double duration() const { return stop - start; }
};

inline double overlap_length(double a_start, double a_stop, double b_start,
                             double b_stop) {
  return std::max(0.0, std::min(a_stop, b_stop) - std::max(a_start, b_start));
}

// One recording's validated annotation: events sorted by start time,
// non-overlapping, with a known total duration.
struct AnnotationDoc {
  std::vector<Event> events;
  double duration = 0.0;   // total recording length, seconds
  std::string source_id;   // usually the file path
  std::string patient_id;  // grouping key for per-patient statistics

  // True when events tile [0, duration] exactly (shared endpoints).
  bool is_tiled() const {
    if (events.empty()) return duration == 0.0;
    if (events.front().start != 0.0) return false;
    for (size_t i = 0; i + 1 < events.size(); ++i)
      if (events[i].stop != events[i + 1].start) return false;
    return events.back().stop == duration;
  }
};

namespace detail {

inline std::string_view strip_comment(std::string_view line) {
  auto pos = line.find('#');
  if (pos != std::string_view::npos) line = line.substr(0, pos);
  return line;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Parses a term file.  Events are returned sorted by start time; overlaps,
// unknown labels, and malformed lines are errors carrying the line number.
// Duration comes from the optional header, else from the max stop time.
inline AnnotationDoc parse_annotation(std::istream& in,
                                      const LabelMap& label_map,
                                      const std::string& path = "") {
  AnnotationDoc doc;
  doc.source_id = path;
  std::optional<double> header_duration;
  std::vector<int> lines;  // original line per event, for overlap reports

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto fields = detail::split_fields(detail::strip_comment(raw));
    if (fields.empty()) continue;

    if (fields[0] == "duration") {
      if (fields.size() != 4 || fields[1] != "=" || fields[3] != "secs")
        throw ParseError(path, lineno,
                         "malformed duration header (expected 'duration = "
                         "<secs> secs')");
      auto d = detail::parse_double(fields[2]);
      if (!d || *d <= 0.0)
        throw ParseError(path, lineno, "bad duration value");
      header_duration = *d;
      continue;
    }

    if (fields.size() < 3 || fields.size() > 4)
      throw ParseError(path, lineno,
                       "expected 'start stop label [confidence]', got " +
                           std::to_string(fields.size()) + " fields");

    auto start = detail::parse_double(fields[0]);
    auto stop = detail::parse_double(fields[1]);
    if (!start || !stop)
      throw ParseError(path, lineno, "malformed time field");
    if (*start < 0.0)
      throw ParseError(path, lineno, "negative start time");
    if (!(*stop > *start))
      throw ParseError(path, lineno, "stop must be greater than start");

    auto label = label_map.find(fields[2]);
    if (!label)
      throw ParseError(path, lineno,
                       "unknown label '" + std::string(fields[2]) + "'");

    Event ev;
    ev.start = *start;
    ev.stop = *stop;
    ev.label = *label;
    if (fields.size() == 4) {
      auto conf = detail::parse_double(fields[3]);
      if (!conf || *conf < 0.0 || *conf > 1.0)
        throw ParseError(path, lineno, "confidence must be in [0,1]");
      ev.confidence = *conf;
      ev.has_confidence = true;
    }
    doc.events.push_back(ev);
    lines.push_back(lineno);
  }

  // Sort by start, keeping line numbers attached for error reporting.
  std::vector<size_t> order(doc.events.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return doc.events[a].start < doc.events[b].start;
  });
  std::vector<Event> sorted;
  std::vector<int> sorted_lines;
  sorted.reserve(doc.events.size());
  for (size_t i : order) {
    sorted.push_back(doc.events[i]);
    sorted_lines.push_back(lines[i]);
  }
  doc.events = std::move(sorted);

  for (size_t i = 0; i + 1 < doc.events.size(); ++i)
    if (doc.events[i].stop > doc.events[i + 1].start)
      throw ParseError(path, sorted_lines[i + 1], "overlapping events");

  double max_stop = doc.events.empty() ? 0.0 : doc.events.back().stop;
  if (header_duration) {
    if (*header_duration < max_stop)
      throw ParseError(path, 0, "events extend past the declared duration");
    doc.duration = *header_duration;
  } else {
    doc.duration = max_stop;
  }
  return doc;
}

inline AnnotationDoc parse_annotation(const std::string& text,
                                      const LabelMap& label_map,
                                      const std::string& path = "") {
  std::istringstream in(text);
  return parse_annotation(in, label_map, path);
}

// Covers every gap in [0, duration] with a default-label event so the doc
// tiles the timeline.  Filler events are flagged so that detection-trial
// scoring can tell system output from synthesized background.
inline AnnotationDoc fill_gaps(const AnnotationDoc& doc, LabelId default_label) {
  AnnotationDoc out;
  out.duration = doc.duration;
  out.source_id = doc.source_id;
  out.patient_id = doc.patient_id;
  out.events.reserve(doc.events.size() + doc.events.size() + 1);

  auto filler = [&](double a, double b) {
    Event ev;
    ev.start = a;
    ev.stop = b;
    ev.label = default_label;
    ev.confidence = 1.0;
    ev.filled = true;
    return ev;
  };

  double cursor = 0.0;
  for (const Event& ev : doc.events) {
    if (ev.start > cursor) out.events.push_back(filler(cursor, ev.start));
    out.events.push_back(ev);
    cursor = ev.stop;
  }
  if (doc.duration > cursor)
    out.events.push_back(filler(cursor, doc.duration));
  return out;
}

// The label in force at time t (half-open intervals).  Doc must be tiled.
inline LabelId label_at(const AnnotationDoc& doc, double t) {
  auto it = std::upper_bound(
      doc.events.begin(), doc.events.end(), t,
      [](double v, const Event& e) { return v < e.stop; });
  if (it == doc.events.end())
    throw std::out_of_range("time outside annotated range");
  return it->label;
}

inline std::string serialize_annotation(const AnnotationDoc& doc,
                                        const LabelMap& label_map) {
  std::ostringstream os;
  os << "duration = " << detail::format_double(doc.duration) << " secs\n";
  for (const Event& ev : doc.events) {
    os << detail::format_double(ev.start) << " "
       << detail::format_double(ev.stop) << " " << label_map.name(ev.label);
    if (ev.has_confidence) os << " " << detail::format_double(ev.confidence);
    os << "\n";
  }
  return os.str();
}

struct PairList {
  struct Entry {
    std::string ref_path;
    std::string hyp_path;
    std::string patient_id;
  };
  std::vector<Entry> entries;
};

// Pair-list file: 'ref_path hyp_path patient_id' per non-comment line.
inline PairList parse_pair_list(std::istream& in, const std::string& path = "") {
  PairList out;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto fields = detail::split_fields(detail::strip_comment(raw));
    if (fields.empty()) continue;
    if (fields.size() != 3)
      throw ParseError(path, lineno,
                       "expected 'ref_path hyp_path patient_id', got " +
                           std::to_string(fields.size()) + " fields");
    PairList::Entry e{std::string(fields[0]), std::string(fields[1]),
                      std::string(fields[2])};
    for (const auto& prev : out.entries)
      if (prev.ref_path == e.ref_path && prev.hyp_path == e.hyp_path)
        throw ParseError(path, lineno, "duplicate (ref, hyp) pair");
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline PairList parse_pair_list(const std::string& text,
                                const std::string& path = "") {
  std::istringstream in(text);
  return parse_pair_list(in, path);
}

}  // namespace evscore

#endif  // EVSCORE_ANNOT_HPP
