#include "aspectlab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "aspectlab/errors.hpp"
#include "aspectlab/rng.hpp"

namespace aspectlab {

namespace {

using json = nlohmann::ordered_json;

const char* kTsvHeader =
    "clause_id\tverb_lemma\tnot_never\ttemporal_adverb\tno_deep_subject\t"
    "past_pres_participle\tduration_in_pp\tperfect\tpresent_tense\tprogressive\t"
    "manner_adverb\tevaluation_adverb\tpast_tense\tduration_for_pp\t"
    "continuous_adverb\tgold_label\tvalid_parse";

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void validate_record(ClauseRecord& rec, std::uint64_t line) {
  if (rec.verb_lemma.empty()) throw FormatError(line, "missing verb_lemma");
  rec.verb_lemma = to_lower(rec.verb_lemma);
  if (rec.marker(kPastTense) && rec.marker(kPresentTense)) {
    throw FormatError(line, "past_tense and present_tense both set");
  }
}

ClauseRecord parse_jsonl_line(const std::string& text, std::uint64_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(line, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError(line, "expected a JSON object");

  ClauseRecord rec;
  for (auto& [key, value] : j.items()) {
    if (key == "clause_id") {
      if (!value.is_string()) throw FormatError(line, "clause_id must be a string");
      rec.clause_id = value.get<std::string>();
    } else if (key == "verb_lemma") {
      if (!value.is_string()) throw FormatError(line, "verb_lemma must be a string");
      rec.verb_lemma = value.get<std::string>();
    } else if (key == "markers") {
      if (!value.is_object()) throw FormatError(line, "markers must be an object");
      for (auto& [mk, mv] : value.items()) {
        const auto it = std::find(kMarkerNames.begin(), kMarkerNames.end(), mk);
        if (it == kMarkerNames.end()) throw FormatError(line, "unknown marker: " + mk);
        if (!mv.is_boolean()) throw FormatError(line, "marker " + mk + " must be a boolean");
        rec.markers[static_cast<std::size_t>(it - kMarkerNames.begin())] = mv.get<bool>();
      }
    } else if (key == "gold_label") {
      if (!value.is_string()) throw FormatError(line, "gold_label must be a string");
      const auto s = value.get<std::string>();
      if (s == "state") rec.gold_label = Label::State;
      else if (s == "event") rec.gold_label = Label::Event;
      else throw FormatError(line, "gold_label must be \"state\" or \"event\"");
    } else if (key == "valid_parse") {
      if (!value.is_boolean()) throw FormatError(line, "valid_parse must be a boolean");
      rec.valid_parse = value.get<bool>();
    } else {
      throw FormatError(line, "unknown key: " + key);
    }
  }
  if (rec.clause_id.empty()) throw FormatError(line, "missing clause_id");
  validate_record(rec, line);
  return rec;
}

std::vector<std::string> split_tsv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = s.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

bool parse_bool01(const std::string& s, std::uint64_t line, const char* field) {
  if (s == "0") return false;
  if (s == "1") return true;
  throw FormatError(line, std::string(field) + " must be 0 or 1");
}

ClauseRecord parse_tsv_line(const std::string& text, std::uint64_t line) {
  const auto cols = split_tsv(text);
  if (cols.size() != 17) {
    throw FormatError(line, "expected 17 columns, got " + std::to_string(cols.size()));
  }
  ClauseRecord rec;
  rec.clause_id = cols[0];
  rec.verb_lemma = cols[1];
  if (rec.clause_id.empty()) throw FormatError(line, "missing clause_id");
  for (int m = 0; m < kNumMarkers; ++m) {
    rec.markers[m] = parse_bool01(cols[2 + m], line, std::string(kMarkerNames[m]).c_str());
  }
  const std::string& gold = cols[15];
  if (gold == "state") rec.gold_label = Label::State;
  else if (gold == "event") rec.gold_label = Label::Event;
  else if (!gold.empty()) throw FormatError(line, "gold_label must be state, event or empty");
  rec.valid_parse = parse_bool01(cols[16], line, "valid_parse");
  validate_record(rec, line);
  return rec;
}

}  // namespace

ClauseSet load_clauses(const std::filesystem::path& path, ClauseFileFormat format) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());

  ClauseSet cs;
  cs.provenance = path.string();
  std::unordered_set<std::string> seen_ids;
  std::string text;
  std::uint64_t line = 0;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (format == ClauseFileFormat::Tsv && !header_seen) {
      if (text != kTsvHeader) throw FormatError(line, "missing or wrong TSV header row");
      header_seen = true;
      continue;
    }
    if (text.empty()) continue;
    ClauseRecord rec = format == ClauseFileFormat::Jsonl ? parse_jsonl_line(text, line)
                                                         : parse_tsv_line(text, line);
    if (!seen_ids.insert(rec.clause_id).second) {
      throw DuplicateClauseIdError(line, rec.clause_id);
    }
    cs.records.push_back(std::move(rec));
  }
  if (format == ClauseFileFormat::Tsv && !header_seen) {
    throw FormatError(1, "missing or wrong TSV header row");
  }
  return cs;
}

void write_clauses(const ClauseSet& cs, const std::filesystem::path& path,
                   ClauseFileFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());

  if (format == ClauseFileFormat::Jsonl) {
    for (const auto& rec : cs.records) {
      json j;
      j["clause_id"] = rec.clause_id;
      j["verb_lemma"] = rec.verb_lemma;
      json markers = json::object();
      for (int m = 0; m < kNumMarkers; ++m) {
        if (rec.markers[m]) markers[std::string(kMarkerNames[m])] = true;
      }
      j["markers"] = markers;
      if (rec.gold_label != Label::Unlabeled) {
        j["gold_label"] = std::string(label_name(rec.gold_label));
      }
      if (!rec.valid_parse) j["valid_parse"] = false;
      out << j.dump() << '\n';
    }
  } else {
    out << kTsvHeader << '\n';
    for (const auto& rec : cs.records) {
      out << rec.clause_id << '\t' << rec.verb_lemma;
      for (int m = 0; m < kNumMarkers; ++m) out << '\t' << (rec.markers[m] ? '1' : '0');
      out << '\t' << label_name(rec.gold_label);
      out << '\t' << (rec.valid_parse ? '1' : '0') << '\n';
    }
  }
}

ClauseSet filter_clauses(const ClauseSet& cs, const SplitConfig& cfg) {
  ClauseSet out;
  std::uint64_t removed_lemma = 0;
  std::uint64_t removed_invalid = 0;
  out.records.reserve(cs.records.size());
  for (const auto& rec : cs.records) {
    if (!rec.valid_parse) {
      ++removed_invalid;
      continue;
    }
    if (cfg.exclude_lemmas.count(rec.verb_lemma)) {
      ++removed_lemma;
      continue;
    }
    out.records.push_back(rec);
  }
  std::ostringstream prov;
  prov << cs.provenance << "; filter: removed_excluded_lemma=" << removed_lemma
       << " removed_invalid_parse=" << removed_invalid;
  out.provenance = prov.str();
  return out;
}

std::pair<ClauseSet, ClauseSet> split_train_test(const ClauseSet& cs,
                                                 const SplitConfig& cfg) {
  const auto& f = cfg.train_fraction;
  if (f.num == 0 || f.den == 0 || f.num >= f.den) {
    throw DomainError("train_fraction must be strictly between 0 and 1");
  }
  for (const auto& rec : cs.records) {
    if (rec.gold_label == Label::Unlabeled) throw UnlabeledRecordError(rec.clause_id);
  }

  std::vector<std::size_t> order(cs.records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(cfg.seed);
  rng.shuffle(order);

  const std::size_t n = order.size();
  const std::size_t cut = static_cast<std::size_t>(
      (static_cast<unsigned __int128>(n) * f.num) / f.den);

  std::pair<ClauseSet, ClauseSet> result;
  result.first.provenance = cs.provenance + "; split=train seed=" + std::to_string(cfg.seed);
  result.second.provenance = cs.provenance + "; split=test seed=" + std::to_string(cfg.seed);
  result.first.records.reserve(cut);
  result.second.records.reserve(n - cut);
  for (std::size_t i = 0; i < n; ++i) {
    (i < cut ? result.first : result.second).records.push_back(cs.records[order[i]]);
  }
  return result;
}

}  // namespace aspectlab
