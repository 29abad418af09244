#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aspectlab {

enum class Label : std::uint8_t { State, Event, Unlabeled };

inline Label opposite(Label l) {
  return l == Label::State ? Label::Event : Label::State;
}

/// The 13 clause markers, in canonical order. This order is load-bearing:
/// it fixes file-format columns, indicator indices and report rows.
enum Marker : int {
  kNotNever = 0,
  kTemporalAdverb,
  kNoDeepSubject,
  kPastPresParticiple,
  kDurationInPP,
  kPerfect,
  kPresentTense,
  kProgressive,
  kMannerAdverb,
  kEvaluationAdverb,
  kPastTense,
  kDurationForPP,
  kContinuousAdverb,
};

inline constexpr int kNumMarkers = 13;

/// Marker keys as used in JSONL/TSV files and model serialization.
inline constexpr std::array<std::string_view, kNumMarkers> kMarkerNames = {
    "not_never",        "temporal_adverb",  "no_deep_subject",
    "past_pres_participle", "duration_in_pp", "perfect",
    "present_tense",    "progressive",      "manner_adverb",
    "evaluation_adverb", "past_tense",      "duration_for_pp",
    "continuous_adverb",
};

/// Human-readable marker names for aligned reports.
inline constexpr std::array<std::string_view, kNumMarkers> kMarkerDisplayNames = {
    "not/never",        "temporal adverb",  "no deep subject",
    "past/pres participle", "duration in-PP", "perfect",
    "present tense",    "progressive",      "manner adverb",
    "evaluation adverb", "past tense",      "duration for-PP",
    "continuous adverb",
};

/// One parsed clause, reduced to the fields the indicators need.
struct ClauseRecord {
  std::string clause_id;
  std::string verb_lemma;  // non-empty, lowercase
  std::array<bool, kNumMarkers> markers{};
  Label gold_label = Label::Unlabeled;
  bool valid_parse = true;

  bool marker(Marker m) const { return markers[static_cast<int>(m)]; }
  void set_marker(Marker m, bool v = true) { markers[static_cast<int>(m)] = v; }

  bool operator==(const ClauseRecord&) const = default;
};

/// An ordered collection of clause records. Ordering is stable: two loads of
/// the same input produce identical orderings.
struct ClauseSet {
  std::vector<ClauseRecord> records;
  std::string provenance;
};

inline std::string_view label_name(Label l) {
  switch (l) {
    case Label::State: return "state";
    case Label::Event: return "event";
    default: return "";
  }
}

}  // namespace aspectlab
