#include "aspectlab/extractor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "aspectlab/errors.hpp"

namespace aspectlab {

namespace {

using json = nlohmann::ordered_json;

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool in_set(const std::set<std::string>& s, const std::string& lemma) {
  return s.count(lemma) != 0;
}

}  // namespace

Pos parse_pos(const std::string& tag) {
  if (tag == "VERB") return Pos::Verb;
  if (tag == "AUX") return Pos::Aux;
  if (tag == "ADV") return Pos::Adv;
  if (tag == "ADP") return Pos::Adp;
  if (tag == "NOUN") return Pos::Noun;
  if (tag == "NUM") return Pos::Num;
  if (tag == "PART") return Pos::Part;
  if (tag == "OTHER") return Pos::Other;
  throw DomainError("unknown POS tag: " + tag);
}

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::Verb: return "VERB";
    case Pos::Aux: return "AUX";
    case Pos::Adv: return "ADV";
    case Pos::Adp: return "ADP";
    case Pos::Noun: return "NOUN";
    case Pos::Num: return "NUM";
    case Pos::Part: return "PART";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

MarkerLexicons default_lexicons() {
  MarkerLexicons lex;
  lex.temporal_adverbs = {"then", "frequently", "often", "once", "yesterday", "daily"};
  lex.manner_adverbs = {"quickly", "slowly", "carefully", "quietly", "loudly", "easily"};
  lex.evaluation_adverbs = {"fortunately", "unfortunately", "surprisingly", "sadly",
                            "luckily"};
  lex.continuous_adverbs = {"continuously", "constantly", "steadily", "perpetually",
                            "endlessly"};
  lex.duration_nouns = {"second", "minute", "hour", "day", "week", "month", "year"};
  return lex;
}

MarkerLexicons load_lexicons(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());

  MarkerLexicons lex;
  std::set<std::string>* current = nullptr;
  std::string raw;
  std::uint64_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // strip comments and surrounding whitespace
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = raw.find_last_not_of(" \t\r");
    std::string text = raw.substr(first, last - first + 1);

    if (text.front() == '[') {
      if (text.back() != ']') throw FormatError(line, "unterminated section header");
      const std::string section = text.substr(1, text.size() - 2);
      if (section == "temporal") current = &lex.temporal_adverbs;
      else if (section == "manner") current = &lex.manner_adverbs;
      else if (section == "evaluation") current = &lex.evaluation_adverbs;
      else if (section == "continuous") current = &lex.continuous_adverbs;
      else if (section == "duration_nouns") current = &lex.duration_nouns;
      else throw FormatError(line, "unknown section: " + section);
      continue;
    }
    if (!current) throw FormatError(line, "lemma before any section header");
    current->insert(to_lower(text));
  }

  // the four adverb classes must be pairwise disjoint
  const std::set<std::string>* classes[] = {&lex.temporal_adverbs, &lex.manner_adverbs,
                                            &lex.evaluation_adverbs,
                                            &lex.continuous_adverbs};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (const auto& lemma : *classes[i]) {
        if (classes[j]->count(lemma)) throw DisjointnessViolationError(lemma);
      }
    }
  }
  return lex;
}

ClauseRecord detect_markers(const TaggedClause& tc, const MarkerLexicons& lex,
                            const ExtractorOptions& opts) {
  if (tc.main_verb_index >= tc.tokens.size()) throw MissingMainVerbError(tc.clause_id);
  const Token& main = tc.tokens[tc.main_verb_index];
  if (main.pos != Pos::Verb && main.pos != Pos::Aux) throw MissingMainVerbError(tc.clause_id);

  ClauseRecord rec;
  rec.clause_id = tc.clause_id;
  rec.verb_lemma = to_lower(main.lemma);
  if (rec.verb_lemma.empty()) throw MissingMainVerbError(tc.clause_id);

  rec.set_marker(kNoDeepSubject, tc.is_passive || !tc.has_surface_subject);
  rec.set_marker(kPastPresParticiple,
                 main.morph.past_participle || main.morph.pres_participle);
  rec.set_marker(kPastTense, main.morph.past);
  rec.set_marker(kPresentTense, main.morph.present);

  for (std::size_t i = 0; i < tc.tokens.size(); ++i) {
    const Token& tok = tc.tokens[i];

    if (tok.lemma == "not" || tok.lemma == "never") rec.set_marker(kNotNever);

    if (tok.pos == Pos::Aux && i < tc.main_verb_index) {
      if (tok.lemma == "be" && main.morph.gerund) rec.set_marker(kProgressive);
      if (tok.lemma == "have" && main.morph.past_participle) rec.set_marker(kPerfect);
    }

    if (tok.pos == Pos::Adv) {
      if (in_set(lex.temporal_adverbs, tok.lemma)) rec.set_marker(kTemporalAdverb);
      if (in_set(lex.manner_adverbs, tok.lemma)) rec.set_marker(kMannerAdverb);
      if (in_set(lex.evaluation_adverbs, tok.lemma)) rec.set_marker(kEvaluationAdverb);
      if (in_set(lex.continuous_adverbs, tok.lemma)) rec.set_marker(kContinuousAdverb);
    }

    if (tok.pos == Pos::Adp && (tok.lemma == "in" || tok.lemma == "for")) {
      const std::size_t limit =
          std::min(tc.tokens.size(), i + 1 + static_cast<std::size_t>(opts.duration_window));
      for (std::size_t j = i + 1; j < limit; ++j) {
        const Token& cand = tc.tokens[j];
        if (cand.pos == Pos::Noun && in_set(lex.duration_nouns, cand.lemma)) {
          rec.set_marker(tok.lemma == "in" ? kDurationInPP : kDurationForPP);
          break;
        }
      }
    }
  }
  return rec;
}

std::vector<TaggedClause> load_tagged_clauses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());

  std::vector<TaggedClause> out;
  std::string text;
  std::uint64_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw FormatError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError(line, "expected a JSON object");

    TaggedClause tc;
    try {
      tc.clause_id = j.at("clause_id").get<std::string>();
      for (const auto& jt : j.at("tokens")) {
        Token tok;
        tok.surface = jt.at("surface").get<std::string>();
        tok.lemma = to_lower(jt.at("lemma").get<std::string>());
        tok.pos = parse_pos(jt.at("pos").get<std::string>());
        if (jt.contains("morph")) {
          for (const auto& m : jt.at("morph")) {
            const auto name = m.get<std::string>();
            if (name == "gerund") tok.morph.gerund = true;
            else if (name == "past_participle") tok.morph.past_participle = true;
            else if (name == "pres_participle") tok.morph.pres_participle = true;
            else if (name == "past") tok.morph.past = true;
            else if (name == "present") tok.morph.present = true;
            else throw FormatError(line, "unknown morph flag: " + name);
          }
        }
        tc.tokens.push_back(std::move(tok));
      }
      tc.main_verb_index = j.at("main_verb_index").get<std::size_t>();
      if (j.contains("has_surface_subject")) {
        tc.has_surface_subject = j.at("has_surface_subject").get<bool>();
      }
      if (j.contains("is_passive")) tc.is_passive = j.at("is_passive").get<bool>();
    } catch (const json::exception& e) {
      throw FormatError(line, std::string("bad tagged clause: ") + e.what());
    } catch (const DomainError& e) {
      throw FormatError(line, e.what());
    }
    if (tc.tokens.empty()) throw FormatError(line, "clause has no tokens");
    for (const auto& tok : tc.tokens) {
      if (tok.morph.past && tok.morph.present) {
        throw FormatError(line, "token marked both past and present");
      }
    }
    out.push_back(std::move(tc));
  }
  return out;
}

}  // namespace aspectlab
