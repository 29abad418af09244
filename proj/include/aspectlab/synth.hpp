#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>

#include "aspectlab/clause.hpp"

namespace aspectlab {

/// Generative parameters for synthetic corpora. Marker probability defaults
/// are the observed stative/event clause rates from the reference corpus
/// study, expressed as probabilities.
struct SynthSpec {
  std::uint64_t n_clauses = 20000;
  double state_prior = 0.162;  // target stative share of clauses
  std::uint32_t n_verbs = 300;
  double zipf_exponent = 1.0;
  /// Fraction of the stative clause mass packed into top-frequency verbs
  /// (the rest comes from the tail). 1 plants the "stative verbs are
  /// frequent" signal at full strength; 0 removes it.
  double frequency_bias = 1.0;
  /// Probability that a clause realizes its verb's non-dominant class.
  double ambiguity_rate = 0.0;
  std::uint64_t seed = 0;

  struct MarkerProb {
    double p_state = 0.0;
    double p_event = 0.0;
  };
  std::array<MarkerProb, kNumMarkers> marker_probs = default_marker_probs();

  static std::array<MarkerProb, kNumMarkers> default_marker_probs();
};

using VerbClassMap = std::map<std::string, Label>;

struct SynthResult {
  ClauseSet clauses;        // gold-labeled, valid parses
  VerbClassMap truth;       // verb -> dominant class
};

/// Draws n_clauses clauses: verb by Zipf, class from the verb's dominant
/// class (flipped with probability ambiguity_rate), markers as per-class
/// Bernoullis with past/present sampled jointly so at most one is set.
/// Deterministic per (spec, seed).
SynthResult generate_corpus(const SynthSpec& spec);

/// Sidecar ground truth: verb_lemma <TAB> class, sorted by lemma.
void write_truth_tsv(const VerbClassMap& truth, const std::filesystem::path& path,
                     const std::string& meta = "");

/// JSON spec file; missing keys keep their defaults. See docs/formats.md.
SynthSpec load_synth_spec(const std::filesystem::path& path);

}  // namespace aspectlab
