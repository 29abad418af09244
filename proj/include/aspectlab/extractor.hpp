#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "aspectlab/clause.hpp"

namespace aspectlab {

enum class Pos : std::uint8_t { Verb, Aux, Adv, Adp, Noun, Num, Part, Other };

Pos parse_pos(const std::string& tag);         // throws DomainError on unknown tag
std::string_view pos_name(Pos pos);

/// Morphology feature bits carried by the tagger; the extractor never
/// guesses them from surface strings.
struct TokenMorph {
  bool gerund = false;
  bool past_participle = false;
  bool pres_participle = false;
  bool past = false;
  bool present = false;
};

struct Token {
  std::string surface;
  std::string lemma;  // lowercase
  Pos pos = Pos::Other;
  TokenMorph morph;
};

/// A pre-segmented clause with POS tags and clause-level parse facts.
struct TaggedClause {
  std::string clause_id;
  std::vector<Token> tokens;
  std::size_t main_verb_index = 0;  // must address a VERB or AUX token
  bool has_surface_subject = true;
  bool is_passive = false;
};

struct MarkerLexicons {
  std::set<std::string> temporal_adverbs;
  std::set<std::string> manner_adverbs;
  std::set<std::string> evaluation_adverbs;
  std::set<std::string> continuous_adverbs;
  std::set<std::string> duration_nouns;
};

struct ExtractorOptions {
  // how far after "in"/"for" a duration noun may sit
  int duration_window = 3;
};

/// Lexicons compiled into the library; byte-for-byte the same sets as
/// data/lexicons/default.lex.
MarkerLexicons default_lexicons();

/// INI-like sections [temporal] [manner] [evaluation] [continuous]
/// [duration_nouns], one lemma per line, '#' comments. A lemma under two
/// adverb sections raises DisjointnessViolationError.
MarkerLexicons load_lexicons(const std::filesystem::path& path);

/// Applies the fixed marker rule set to one tagged clause. Pure: identical
/// inputs give identical records.
ClauseRecord detect_markers(const TaggedClause& tc, const MarkerLexicons& lex,
                            const ExtractorOptions& opts = {});

/// JSONL input mirroring TaggedClause; see docs/formats.md.
std::vector<TaggedClause> load_tagged_clauses(const std::filesystem::path& path);

}  // namespace aspectlab
