#include <algorithm>
#include <cmath>
#include <limits>

#include "aspectlab/errors.hpp"
#include "aspectlab/learners.hpp"

namespace aspectlab {

std::vector<LabeledExample> make_examples(const ClauseSet& cs, const VerbVectors& vectors) {
  std::vector<LabeledExample> out;
  out.reserve(cs.records.size());
  for (const auto& rec : cs.records) {
    if (rec.gold_label == Label::Unlabeled) throw UnlabeledRecordError(rec.clause_id);
    out.push_back({rec.verb_lemma, vector_for(vectors, rec.verb_lemma), rec.gold_label});
  }
  return out;
}

Label predict_threshold(const ThresholdModel& m, const IndicatorVector& x) {
  const bool at_or_above = x.values[m.indicator_index] >= m.threshold;
  if (m.state_side == StateSide::AtOrAbove) {
    return at_or_above ? Label::State : Label::Event;
  }
  return at_or_above ? Label::Event : Label::State;
}

ScalarThresholdFit fit_scalar_threshold(std::vector<ScalarPoint> points) {
  if (points.empty()) throw EmptyTrainingSetError();
  std::sort(points.begin(), points.end(),
            [](const ScalarPoint& a, const ScalarPoint& b) { return a.value < b.value; });

  // collapse equal values so candidates are midpoints of *distinct* values
  std::vector<ScalarPoint> distinct;
  distinct.reserve(points.size());
  for (const auto& p : points) {
    if (!distinct.empty() && distinct.back().value == p.value) {
      distinct.back().w_state += p.w_state;
      distinct.back().w_event += p.w_event;
    } else {
      distinct.push_back(p);
    }
  }

  double total_state = 0.0, total_event = 0.0;
  for (const auto& p : distinct) {
    total_state += p.w_state;
    total_event += p.w_event;
  }
  const double total = total_state + total_event;

  const std::size_t m = distinct.size();
  ScalarThresholdFit best;
  best.accuracy = -1.0;

  // cut k: values below the threshold are distinct[0..k), at-or-above are the
  // rest. k = 0 is -inf, k = m is +inf; thresholds grow with k, so keeping the
  // first maximum realizes the smaller-threshold / AtOrAbove tie-break.
  double state_below = 0.0, event_below = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    double threshold;
    if (k == 0) threshold = -std::numeric_limits<double>::infinity();
    else if (k == m) threshold = std::numeric_limits<double>::infinity();
    else threshold = (distinct[k - 1].value + distinct[k].value) / 2.0;

    const double acc_above = (event_below + (total_state - state_below)) / total;
    const double acc_below = (state_below + (total_event - event_below)) / total;
    if (acc_above > best.accuracy) {
      best = {threshold, StateSide::AtOrAbove, acc_above};
    }
    if (acc_below > best.accuracy) {
      best = {threshold, StateSide::Below, acc_below};
    }

    if (k < m) {
      state_below += distinct[k].w_state;
      event_below += distinct[k].w_event;
    }
  }
  return best;
}

ThresholdFit fit_threshold(const std::vector<LabeledExample>& train, int indicator_index) {
  if (train.empty()) throw EmptyTrainingSetError();
  if (indicator_index < 0 || indicator_index >= kNumIndicators) {
    throw DomainError("indicator_index out of range");
  }
  std::vector<ScalarPoint> points;
  points.reserve(train.size());
  for (const auto& ex : train) {
    points.push_back({ex.x.values[indicator_index],
                      ex.y == Label::State ? 1.0 : 0.0,
                      ex.y == Label::Event ? 1.0 : 0.0});
  }
  const ScalarThresholdFit fit = fit_scalar_threshold(std::move(points));
  return {ThresholdModel{indicator_index, fit.threshold, fit.side}, fit.accuracy};
}

Label predict(const Model& m, const IndicatorVector& x) {
  return std::visit(
      [&](const auto& model) -> Label {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, ThresholdModel>) return predict_threshold(model, x);
        else if constexpr (std::is_same_v<T, LinearModel>) return predict_loglinear(model, x);
        else if constexpr (std::is_same_v<T, FunctionTree>) return predict_gp(model, x);
        else return predict_decision_tree(model, x);
      },
      m);
}

std::string_view model_kind(const Model& m) {
  switch (m.index()) {
    case 0: return "threshold";
    case 1: return "loglinear";
    case 2: return "gptree";
    default: return "dtree";
  }
}

}  // namespace aspectlab
