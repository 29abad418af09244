#include "aspectlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "aspectlab/errors.hpp"
#include "aspectlab/indicators.hpp"
#include "aspectlab/rng.hpp"

namespace aspectlab {

std::array<SynthSpec::MarkerProb, kNumMarkers> SynthSpec::default_marker_probs() {
  // per-class clause rates observed in the reference corpus study
  return {{
      {0.0444, 0.0156},  // not_never
      {0.0100, 0.0270},  // temporal_adverb
      {0.3605, 0.5756},  // no_deep_subject
      {0.2098, 0.1537},  // past_pres_participle
      {0.0016, 0.0060},  // duration_in_pp
      {0.0227, 0.0344},  // perfect
      {0.1119, 0.0894},  // present_tense
      {0.0179, 0.0269},  // progressive
      {0.0000, 0.0003},  // manner_adverb
      {0.0069, 0.0119},  // evaluation_adverb
      {0.6285, 0.6569},  // past_tense
      {0.0059, 0.0061},  // duration_for_pp
      {0.0004, 0.0003},  // continuous_adverb
  }};
}

namespace {

void validate(const SynthSpec& spec) {
  if (spec.n_clauses == 0) throw SpecError("n_clauses must be >= 1");
  if (spec.n_verbs == 0) throw SpecError("n_verbs must be >= 1");
  if (!(spec.state_prior > 0.0) || !(spec.state_prior < 1.0)) {
    throw SpecError("state_prior must be in (0,1)");
  }
  if (spec.zipf_exponent < 0.0) throw SpecError("zipf_exponent must be >= 0");
  if (spec.frequency_bias < 0.0 || spec.frequency_bias > 1.0) {
    throw SpecError("frequency_bias must be in [0,1]");
  }
  if (spec.ambiguity_rate < 0.0 || spec.ambiguity_rate >= 1.0) {
    throw SpecError("ambiguity_rate must be in [0,1)");
  }
  for (const auto& mp : spec.marker_probs) {
    if (mp.p_state < 0.0 || mp.p_state > 1.0 || mp.p_event < 0.0 || mp.p_event > 1.0) {
      throw SpecError("marker probabilities must be in [0,1]");
    }
  }
}

std::string verb_name(std::uint32_t rank, std::uint32_t n_verbs) {
  int width = 1;
  for (std::uint32_t v = n_verbs; v >= 10; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "v%0*u", width, rank);
  return buf;
}

/// Deterministic stative rank assignment. Normalized Zipf weights are split
/// so stative verbs hold ~state_prior of the clause mass: a head prefix of
/// ranks takes up to frequency_bias * state_prior of mass, the rest fills in
/// from the tail. Head placement gives stative verbs higher counts on
/// average, reproducing the frequency signal.
std::vector<bool> assign_stative_ranks(const std::vector<double>& mass, double prior,
                                       double bias) {
  const std::size_t n = mass.size();
  std::vector<bool> stative(n, false);
  double acc = 0.0;
  std::size_t head_end = 0;
  const double head_budget = bias * prior;
  while (head_end < n && acc + mass[head_end] <= head_budget + 1e-12) {
    stative[head_end] = true;
    acc += mass[head_end];
    ++head_end;
  }
  for (std::size_t r = n; r-- > head_end;) {
    if (acc + mass[r] > prior + 1e-12) break;
    stative[r] = true;
    acc += mass[r];
  }
  if (acc == 0.0) stative[n - 1] = true;  // prior smaller than every verb: keep one
  return stative;
}

}  // namespace

SynthResult generate_corpus(const SynthSpec& spec) {
  validate(spec);

  // normalized Zipf weights by rank (rank 1 first)
  std::vector<double> mass(spec.n_verbs);
  double total = 0.0;
  for (std::uint32_t r = 0; r < spec.n_verbs; ++r) {
    mass[r] = std::pow(static_cast<double>(r + 1), -spec.zipf_exponent);
    total += mass[r];
  }
  for (auto& m : mass) m /= total;
  std::vector<double> cumulative(spec.n_verbs);
  double acc = 0.0;
  for (std::uint32_t r = 0; r < spec.n_verbs; ++r) {
    acc += mass[r];
    cumulative[r] = acc;
  }
  cumulative.back() = 1.0;

  const std::vector<bool> stative =
      assign_stative_ranks(mass, spec.state_prior, spec.frequency_bias);

  SynthResult result;
  std::vector<std::string> names(spec.n_verbs);
  for (std::uint32_t r = 0; r < spec.n_verbs; ++r) {
    names[r] = verb_name(r + 1, spec.n_verbs);
    result.truth[names[r]] = stative[r] ? Label::State : Label::Event;
  }

  // past/present are sampled jointly; renormalize if a class's pair of
  // probabilities would exceed 1 so at most one flag is ever set
  std::array<double, 2> p_past{}, p_pres{};
  for (int cls = 0; cls < 2; ++cls) {
    const bool is_state = cls == 0;
    double past = is_state ? spec.marker_probs[kPastTense].p_state
                           : spec.marker_probs[kPastTense].p_event;
    double pres = is_state ? spec.marker_probs[kPresentTense].p_state
                           : spec.marker_probs[kPresentTense].p_event;
    const double sum = past + pres;
    if (sum > 1.0) {
      past /= sum;
      pres /= sum;
    }
    p_past[cls] = past;
    p_pres[cls] = pres;
  }

  SplitMix64 rng(spec.seed);
  result.clauses.records.reserve(spec.n_clauses);
  {
    std::ostringstream prov;
    prov << "synth(seed=" << spec.seed << " n_clauses=" << spec.n_clauses
         << " n_verbs=" << spec.n_verbs << ")";
    result.clauses.provenance = prov.str();
  }

  int id_width = 1;
  for (std::uint64_t v = spec.n_clauses; v >= 10; v /= 10) ++id_width;
  for (std::uint64_t c = 0; c < spec.n_clauses; ++c) {
    const double u = rng.next_unit();
    const auto rank = static_cast<std::uint32_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());

    Label label = stative[rank] ? Label::State : Label::Event;
    if (rng.next_unit() < spec.ambiguity_rate) label = opposite(label);

    ClauseRecord rec;
    char idbuf[40];
    std::snprintf(idbuf, sizeof idbuf, "synth-%0*llu", id_width,
                  static_cast<unsigned long long>(c + 1));
    rec.clause_id = idbuf;
    rec.verb_lemma = names[rank];
    rec.gold_label = label;

    const int cls = label == Label::State ? 0 : 1;
    for (int m = 0; m < kNumMarkers; ++m) {
      if (m == kPastTense || m == kPresentTense) continue;
      const double p = cls == 0 ? spec.marker_probs[m].p_state : spec.marker_probs[m].p_event;
      rec.markers[m] = rng.next_bernoulli(p);
    }
    const double tense = rng.next_unit();
    if (tense < p_past[cls]) rec.set_marker(kPastTense);
    else if (tense < p_past[cls] + p_pres[cls]) rec.set_marker(kPresentTense);

    result.clauses.records.push_back(std::move(rec));
  }
  return result;
}

void write_truth_tsv(const VerbClassMap& truth, const std::filesystem::path& path,
                     const std::string& meta) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  if (!meta.empty()) {
    std::istringstream lines(meta);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << "verb_lemma\tclass\n";
  for (const auto& [lemma, label] : truth) {
    out << lemma << '\t' << label_name(label) << '\n';
  }
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad synth spec: ") + e.what());
  }

  SynthSpec spec;
  try {
    if (j.contains("n_clauses")) spec.n_clauses = j.at("n_clauses").get<std::uint64_t>();
    if (j.contains("state_prior")) spec.state_prior = j.at("state_prior").get<double>();
    if (j.contains("n_verbs")) spec.n_verbs = j.at("n_verbs").get<std::uint32_t>();
    if (j.contains("zipf_exponent")) spec.zipf_exponent = j.at("zipf_exponent").get<double>();
    if (j.contains("frequency_bias")) {
      spec.frequency_bias = j.at("frequency_bias").get<double>();
    }
    if (j.contains("ambiguity_rate")) {
      spec.ambiguity_rate = j.at("ambiguity_rate").get<double>();
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("marker_probs")) {
      for (const auto& [key, value] : j.at("marker_probs").items()) {
        const int idx = indicator_index_by_name(key);
        if (idx <= 0) throw SpecError("unknown marker in synth spec: " + key);
        spec.marker_probs[idx - 1].p_state = value.at("state").get<double>();
        spec.marker_probs[idx - 1].p_event = value.at("event").get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad synth spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

}  // namespace aspectlab
