#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aspectlab/learners.hpp"
#include "aspectlab/stats.hpp"

namespace aspectlab {

/// Confusion counts with State as the positive class.
struct Confusion {
  std::uint64_t tp = 0;  // gold State, predicted State
  std::uint64_t fp = 0;  // gold Event, predicted State
  std::uint64_t tn = 0;  // gold Event, predicted Event
  std::uint64_t fn = 0;  // gold State, predicted Event

  std::uint64_t total() const { return tp + fp + tn + fn; }
};

/// A metric that is undefined (0/0) is left empty.
using Metric = std::optional<double>;

struct SignificanceEntry {
  std::string test_name;   // "exact_mcnemar"
  std::string against;     // comparison target's name
  double p_value = 1.0;
  std::uint64_t n_disagreements = 0;
};

struct EvalReport {
  std::string name;
  Confusion confusion;
  double accuracy = 0.0;
  Metric state_recall;
  Metric state_precision;
  Metric event_recall;
  Metric event_precision;
  std::optional<SignificanceEntry> significance;
  std::vector<Label> predictions;  // aligned with the scored examples
};

/// Constant classifier emitting the training-majority class (ties ->
/// Event), encoded as a degenerate threshold model.
Model baseline_classifier(const std::vector<LabeledExample>& train);

EvalReport evaluate(const Model& m, const std::vector<LabeledExample>& test,
                    const std::string& name = "");

/// Table-shaped summary: accuracy / state recall / state precision / event
/// recall / event precision as percentages to 1 decimal, baseline row last.
/// When `undefined_precision_as_100` is set, an empty predicted class is
/// rendered as 100.0% instead of "—" (display convention only; the stored
/// metric stays undefined).
struct ResultsRenderOptions {
  bool undefined_precision_as_100 = true;
};

std::string results_report_tsv(const std::vector<EvalReport>& reports,
                               const std::string& meta = "",
                               const ResultsRenderOptions& opts = {});
std::string results_report_text(const std::vector<EvalReport>& reports,
                                const std::string& meta = "",
                                const ResultsRenderOptions& opts = {});
std::string results_report_json(const std::vector<EvalReport>& reports,
                                const std::string& meta = "");

}  // namespace aspectlab
