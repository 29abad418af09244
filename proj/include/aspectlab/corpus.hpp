#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>

#include "aspectlab/clause.hpp"

namespace aspectlab {

enum class ClauseFileFormat { Jsonl, Tsv };

/// Exact train fraction, kept rational so the split point floor(n*num/den)
/// never suffers float rounding.
struct Fraction {
  std::uint64_t num = 1;
  std::uint64_t den = 2;
};

struct SplitConfig {
  std::uint64_t seed = 0;
  Fraction train_fraction{1, 2};                  // must be in (0,1)
  std::set<std::string> exclude_lemmas{"be", "have"};
};

/// Reads clause records in file order. Invalid-parse records are kept (and
/// flagged); malformed lines raise FormatError with their 1-based line
/// number. See docs/formats.md for both formats.
ClauseSet load_clauses(const std::filesystem::path& path, ClauseFileFormat format);

/// Writes records in order; load_clauses(write_clauses(x)) == x.
void write_clauses(const ClauseSet& cs, const std::filesystem::path& path,
                   ClauseFileFormat format);

/// Drops records whose lemma is excluded or whose parse is invalid, keeping
/// the survivors' order. Removal counts by reason are appended to the
/// returned set's provenance.
ClauseSet filter_clauses(const ClauseSet& cs, const SplitConfig& cfg);

/// Seeded uniform shuffle (Fisher-Yates over SplitMix64) followed by a cut
/// at floor(n * train_fraction). Every record must carry a gold label.
std::pair<ClauseSet, ClauseSet> split_train_test(const ClauseSet& cs,
                                                 const SplitConfig& cfg);

}  // namespace aspectlab
