#include "aspectlab/indicators.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "aspectlab/errors.hpp"
#include "aspectlab/parallel.hpp"

namespace aspectlab {

namespace {

std::string format_double_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

void write_meta(std::ostream& out, const std::string& meta) {
  if (meta.empty()) return;
  std::istringstream lines(meta);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << '\n';
}

std::string mean_display(int indicator, double v) {
  // frequency is a raw count, the rest are percentages
  return indicator == 0 ? format_fixed(v, 2) : format_fixed(v, 2) + "%";
}

std::vector<int> rows_by_significance(const IndicatorStats& stats) {
  std::vector<int> rows(kNumIndicators);
  std::iota(rows.begin(), rows.end(), 0);
  std::sort(rows.begin(), rows.end(), [&](int a, int b) {
    const double pa = stats.per_indicator[a].p_value;
    const double pb = stats.per_indicator[b].p_value;
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return rows;
}

}  // namespace

std::string_view indicator_name(int index) {
  if (index == 0) return "frequency";
  return kMarkerNames[index - 1];
}

std::string_view indicator_display_name(int index) {
  if (index == 0) return "frequency";
  return kMarkerDisplayNames[index - 1];
}

int indicator_index_by_name(std::string_view name) {
  if (name == "frequency" || name == "freq") return 0;
  for (int m = 0; m < kNumMarkers; ++m) {
    if (kMarkerNames[m] == name) return m + 1;
  }
  return -1;
}

VerbProfiles build_profiles(const ClauseSet& cs) {
  const std::size_t n = cs.records.size();
  const std::size_t shards = std::min<std::size_t>(thread_cap(), 16);
  const std::size_t chunk = shards ? (n + shards - 1) / shards : n;

  std::vector<VerbProfiles> partial(std::max<std::size_t>(shards, 1));
  parallel_for(partial.size(), [&](std::size_t s) {
    const std::size_t begin = s * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    auto& local = partial[s];
    for (std::size_t i = begin; i < end; ++i) {
      const auto& rec = cs.records[i];
      auto& prof = local[rec.verb_lemma];
      if (prof.clause_count == 0) prof.verb_lemma = rec.verb_lemma;
      ++prof.clause_count;
      for (int m = 0; m < kNumMarkers; ++m) {
        if (rec.markers[m]) ++prof.marker_counts[m];
      }
    }
  });

  // merge shards in order; counts are associative so the result matches a
  // sequential pass
  VerbProfiles out = std::move(partial[0]);
  for (std::size_t s = 1; s < partial.size(); ++s) {
    for (auto& [lemma, prof] : partial[s]) {
      auto& dst = out[lemma];
      if (dst.clause_count == 0) dst.verb_lemma = lemma;
      dst.clause_count += prof.clause_count;
      for (int m = 0; m < kNumMarkers; ++m) dst.marker_counts[m] += prof.marker_counts[m];
    }
  }
  return out;
}

IndicatorVector to_indicator_vector(const VerbProfile& p) {
  IndicatorVector v;
  v.values[0] = static_cast<double>(p.clause_count);
  if (p.clause_count == 0) return v;
  for (int m = 0; m < kNumMarkers; ++m) {
    v.values[1 + m] = 100.0 * static_cast<double>(p.marker_counts[m]) /
                      static_cast<double>(p.clause_count);
  }
  return v;
}

VerbVectors to_indicator_vectors(const VerbProfiles& profiles) {
  VerbVectors out;
  for (const auto& [lemma, prof] : profiles) out.emplace(lemma, to_indicator_vector(prof));
  return out;
}

const IndicatorVector& vector_for(const VerbVectors& vectors, const std::string& lemma) {
  static const IndicatorVector kZero{};
  const auto it = vectors.find(lemma);
  return it == vectors.end() ? kZero : it->second;
}

IndicatorStats class_means(const ClauseSet& train, const VerbVectors& vectors,
                           MeanWeighting weighting) {
  IndicatorStats stats;
  std::array<double, kNumIndicators> sum_state{};
  std::array<double, kNumIndicators> sum_event{};
  std::uint64_t n_state = 0;
  std::uint64_t n_event = 0;

  if (weighting == MeanWeighting::PerClause) {
    for (const auto& rec : train.records) {
      if (rec.gold_label == Label::Unlabeled) throw UnlabeledRecordError(rec.clause_id);
      const auto it = vectors.find(rec.verb_lemma);
      if (it == vectors.end()) throw MissingVectorError(rec.verb_lemma);
      auto& sums = rec.gold_label == Label::State ? sum_state : sum_event;
      (rec.gold_label == Label::State ? n_state : n_event)++;
      for (int i = 0; i < kNumIndicators; ++i) sums[i] += it->second.values[i];
    }
  } else {
    std::set<std::string> state_verbs, event_verbs;
    for (const auto& rec : train.records) {
      if (rec.gold_label == Label::Unlabeled) throw UnlabeledRecordError(rec.clause_id);
      if (!vectors.count(rec.verb_lemma)) throw MissingVectorError(rec.verb_lemma);
      (rec.gold_label == Label::State ? state_verbs : event_verbs).insert(rec.verb_lemma);
    }
    for (const auto& lemma : state_verbs) {
      ++n_state;
      for (int i = 0; i < kNumIndicators; ++i)
        sum_state[i] += vectors.at(lemma).values[i];
    }
    for (const auto& lemma : event_verbs) {
      ++n_event;
      for (int i = 0; i < kNumIndicators; ++i)
        sum_event[i] += vectors.at(lemma).values[i];
    }
  }

  if (n_state == 0) throw EmptyClassError("state");
  if (n_event == 0) throw EmptyClassError("event");
  stats.n_state_clauses = n_state;
  stats.n_event_clauses = n_event;
  for (int i = 0; i < kNumIndicators; ++i) {
    stats.per_indicator[i].stative_mean = sum_state[i] / static_cast<double>(n_state);
    stats.per_indicator[i].event_mean = sum_event[i] / static_cast<double>(n_event);
  }
  return stats;
}

IndicatorStats compute_indicator_stats(const ClauseSet& train, const VerbVectors& vectors,
                                       MeanWeighting weighting) {
  IndicatorStats stats = class_means(train, vectors, weighting);

  std::array<std::vector<double>, kNumIndicators> state_samples;
  std::array<std::vector<double>, kNumIndicators> event_samples;
  for (const auto& rec : train.records) {
    const IndicatorVector& v = vectors.at(rec.verb_lemma);
    auto& dst = rec.gold_label == Label::State ? state_samples : event_samples;
    for (int i = 0; i < kNumIndicators; ++i) dst[i].push_back(v.values[i]);
  }
  for (int i = 0; i < kNumIndicators; ++i) {
    const WelchResult w = welch_t_test(state_samples[i], event_samples[i]);
    stats.per_indicator[i].t_statistic = w.t;
    stats.per_indicator[i].degrees_of_freedom = w.df;
    stats.per_indicator[i].p_value = w.p;
    stats.per_indicator[i].degenerate = w.degenerate;
  }
  return stats;
}

std::string indicator_table_tsv(const IndicatorStats& stats, const std::string& meta) {
  std::ostringstream out;
  write_meta(out, meta);
  out << "indicator\tstative_mean\tevent_mean\tp_value\n";
  for (int i : rows_by_significance(stats)) {
    const auto& s = stats.per_indicator[i];
    out << indicator_display_name(i) << '\t' << mean_display(i, s.stative_mean) << '\t'
        << mean_display(i, s.event_mean) << '\t' << format_fixed(s.p_value, 4) << '\n';
  }
  return out.str();
}

std::string indicator_table_text(const IndicatorStats& stats, const std::string& meta) {
  std::ostringstream out;
  write_meta(out, meta);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-22s %14s %14s %10s\n", "indicator", "stative mean",
                "event mean", "p-value");
  out << buf;
  for (int i : rows_by_significance(stats)) {
    const auto& s = stats.per_indicator[i];
    std::snprintf(buf, sizeof buf, "%-22s %14s %14s %10s\n",
                  std::string(indicator_display_name(i)).c_str(),
                  mean_display(i, s.stative_mean).c_str(),
                  mean_display(i, s.event_mean).c_str(),
                  format_fixed(s.p_value, 4).c_str());
    out << buf;
  }
  return out.str();
}

void write_vectors_tsv(const VerbVectors& vectors, const std::filesystem::path& path,
                       const std::string& meta) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  write_meta(out, meta);
  out << "verb_lemma";
  for (int i = 0; i < kNumIndicators; ++i) out << '\t' << indicator_name(i);
  out << '\n';
  for (const auto& [lemma, v] : vectors) {
    out << lemma;
    for (int i = 0; i < kNumIndicators; ++i) out << '\t' << format_double_shortest(v.values[i]);
    out << '\n';
  }
}

VerbVectors load_vectors_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());
  VerbVectors out;
  std::string line;
  std::uint64_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // header row
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 1 + kNumIndicators) {
      throw FormatError(lineno, "expected 15 columns in vectors TSV");
    }
    IndicatorVector v;
    for (int i = 0; i < kNumIndicators; ++i) {
      const auto& s = cols[1 + i];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v.values[i]);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw FormatError(lineno, "bad number: " + s);
      }
    }
    if (!out.emplace(cols[0], v).second) {
      throw FormatError(lineno, "duplicate verb: " + cols[0]);
    }
  }
  return out;
}

}  // namespace aspectlab
