#include "aspectlab/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "aspectlab/errors.hpp"

namespace aspectlab {

namespace {

using json = nlohmann::ordered_json;

std::string pct1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
  return buf;
}

std::string metric_display(const Metric& m, const ResultsRenderOptions& opts) {
  if (m.has_value()) return pct1(*m);
  return opts.undefined_precision_as_100 ? "100.0%" : "—";
}

void write_meta(std::ostream& out, const std::string& meta) {
  if (meta.empty()) return;
  std::istringstream lines(meta);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << '\n';
}

/// Copies the reports into display order: given order with any report named
/// "baseline" moved to the end.
std::vector<const EvalReport*> display_order(const std::vector<EvalReport>& reports) {
  std::vector<const EvalReport*> out;
  std::vector<const EvalReport*> baselines;
  for (const auto& r : reports) {
    (r.name == "baseline" ? baselines : out).push_back(&r);
  }
  out.insert(out.end(), baselines.begin(), baselines.end());
  return out;
}

}  // namespace

Model baseline_classifier(const std::vector<LabeledExample>& train) {
  if (train.empty()) throw EmptyTrainingSetError();
  std::uint64_t n_state = 0;
  for (const auto& ex : train) n_state += ex.y == Label::State;
  const bool majority_state = n_state > train.size() - n_state;  // ties -> Event
  // constant classifier as a degenerate threshold: nothing is below -inf,
  // everything is at or above it
  ThresholdModel m;
  m.indicator_index = 0;
  m.threshold = -std::numeric_limits<double>::infinity();
  m.state_side = majority_state ? StateSide::AtOrAbove : StateSide::Below;
  return m;
}

EvalReport evaluate(const Model& m, const std::vector<LabeledExample>& test,
                    const std::string& name) {
  if (test.empty()) throw EmptyTrainingSetError();
  EvalReport r;
  r.name = name;
  r.predictions.reserve(test.size());
  for (const auto& ex : test) {
    if (ex.y == Label::Unlabeled) throw UnlabeledRecordError(ex.verb_lemma);
    const Label pred = predict(m, ex.x);
    r.predictions.push_back(pred);
    if (ex.y == Label::State) {
      (pred == Label::State ? r.confusion.tp : r.confusion.fn)++;
    } else {
      (pred == Label::State ? r.confusion.fp : r.confusion.tn)++;
    }
  }
  const auto& c = r.confusion;
  r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  auto ratio = [](std::uint64_t num, std::uint64_t den) -> Metric {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.state_recall = ratio(c.tp, c.tp + c.fn);
  r.state_precision = ratio(c.tp, c.tp + c.fp);
  r.event_recall = ratio(c.tn, c.tn + c.fp);
  r.event_precision = ratio(c.tn, c.tn + c.fn);
  return r;
}

std::string results_report_tsv(const std::vector<EvalReport>& reports,
                               const std::string& meta,
                               const ResultsRenderOptions& opts) {
  std::ostringstream out;
  write_meta(out, meta);
  out << "model\taccuracy\tstate_recall\tstate_precision\tevent_recall\tevent_precision\n";
  for (const auto* r : display_order(reports)) {
    out << r->name << '\t' << pct1(r->accuracy) << '\t'
        << metric_display(r->state_recall, opts) << '\t'
        << metric_display(r->state_precision, opts) << '\t'
        << metric_display(r->event_recall, opts) << '\t'
        << metric_display(r->event_precision, opts) << '\n';
  }
  return out.str();
}

std::string results_report_text(const std::vector<EvalReport>& reports,
                                const std::string& meta,
                                const ResultsRenderOptions& opts) {
  std::ostringstream out;
  write_meta(out, meta);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-24s %9s %13s %16s %13s %16s\n", "model", "accuracy",
                "state recall", "state precision", "event recall", "event precision");
  out << buf;
  for (const auto* r : display_order(reports)) {
    std::snprintf(buf, sizeof buf, "%-24s %9s %13s %16s %13s %16s\n", r->name.c_str(),
                  pct1(r->accuracy).c_str(), metric_display(r->state_recall, opts).c_str(),
                  metric_display(r->state_precision, opts).c_str(),
                  metric_display(r->event_recall, opts).c_str(),
                  metric_display(r->event_precision, opts).c_str());
    out << buf;
  }
  return out.str();
}

std::string results_report_json(const std::vector<EvalReport>& reports,
                                const std::string& meta) {
  json doc;
  if (!meta.empty()) {
    json m = json::array();
    std::istringstream lines(meta);
    std::string line;
    while (std::getline(lines, line)) m.push_back(line);
    doc["meta"] = m;
  }
  json models = json::array();
  for (const auto* r : display_order(reports)) {
    json jr;
    jr["name"] = r->name;
    jr["accuracy"] = r->accuracy;
    jr["confusion"] = {{"tp", r->confusion.tp},
                       {"fp", r->confusion.fp},
                       {"tn", r->confusion.tn},
                       {"fn", r->confusion.fn}};
    auto metric = [](const Metric& m) {
      return m.has_value() ? json(*m) : json(nullptr);
    };
    jr["state_recall"] = metric(r->state_recall);
    jr["state_precision"] = metric(r->state_precision);
    jr["event_recall"] = metric(r->event_recall);
    jr["event_precision"] = metric(r->event_precision);
    if (r->significance.has_value()) {
      jr["significance"] = {{"test", r->significance->test_name},
                            {"against", r->significance->against},
                            {"p_value", r->significance->p_value},
                            {"n_disagreements", r->significance->n_disagreements}};
    }
    models.push_back(jr);
  }
  doc["models"] = models;
  return doc.dump(2) + "\n";
}

}  // namespace aspectlab
