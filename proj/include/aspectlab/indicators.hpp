#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "aspectlab/clause.hpp"
#include "aspectlab/stats.hpp"

namespace aspectlab {

/// 14 per-verb indicator values: index 0 is the raw clause count
/// ("frequency"), indices 1..13 are marker rates as percentages in [0,100],
/// in canonical marker order.
inline constexpr int kNumIndicators = kNumMarkers + 1;

std::string_view indicator_name(int index);          // file/serialization key
std::string_view indicator_display_name(int index);  // for aligned reports
int indicator_index_by_name(std::string_view name);  // -1 if unknown

struct VerbProfile {
  std::string verb_lemma;
  std::uint64_t clause_count = 0;
  std::array<std::uint64_t, kNumMarkers> marker_counts{};

  bool operator==(const VerbProfile&) const = default;
};

struct IndicatorVector {
  std::array<double, kNumIndicators> values{};

  double frequency() const { return values[0]; }
  double rate(Marker m) const { return values[1 + static_cast<int>(m)]; }
  bool operator==(const IndicatorVector&) const = default;
};

using VerbProfiles = std::map<std::string, VerbProfile>;
using VerbVectors = std::map<std::string, IndicatorVector>;

/// Counts clauses and marker occurrences per lemma. Invariant to clause
/// order; parallelized by sharding with deterministic merges.
VerbProfiles build_profiles(const ClauseSet& cs);

/// Rates are 100 * count / clause_count, or all zero for an unseen verb.
IndicatorVector to_indicator_vector(const VerbProfile& p);

VerbVectors to_indicator_vectors(const VerbProfiles& profiles);

/// Returns the verb's vector, or the all-zero vector when the verb never
/// occurred in the profiled corpus.
const IndicatorVector& vector_for(const VerbVectors& vectors,
                                  const std::string& lemma);

struct IndicatorStat {
  double stative_mean = 0.0;
  double event_mean = 0.0;
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool degenerate = false;
};

struct IndicatorStats {
  std::array<IndicatorStat, kNumIndicators> per_indicator{};
  std::uint64_t n_state_clauses = 0;
  std::uint64_t n_event_clauses = 0;
};

enum class MeanWeighting { PerClause, PerVerbType };

/// Class-conditional indicator means over a labeled clause set. PerClause
/// weights each clause by its verb's vector; PerVerbType averages over
/// distinct verbs instead. Each class must be non-empty.
IndicatorStats class_means(const ClauseSet& train, const VerbVectors& vectors,
                           MeanWeighting weighting = MeanWeighting::PerClause);

/// class_means plus a Welch t test per indicator (needs >= 2 clauses per
/// class).
IndicatorStats compute_indicator_stats(const ClauseSet& train,
                                       const VerbVectors& vectors,
                                       MeanWeighting weighting = MeanWeighting::PerClause);

/// Rows in ascending p order: Indicator / Stative Mean / Event Mean /
/// P-value. Marker means carry a '%', frequency does not; p to 4 decimals.
std::string indicator_table_tsv(const IndicatorStats& stats,
                                const std::string& meta = "");
std::string indicator_table_text(const IndicatorStats& stats,
                                 const std::string& meta = "");

/// One row per verb: lemma, frequency, 13 rates; shortest round-trip float
/// formatting.
void write_vectors_tsv(const VerbVectors& vectors, const std::filesystem::path& path,
                       const std::string& meta = "");
VerbVectors load_vectors_tsv(const std::filesystem::path& path);

}  // namespace aspectlab
