#include <cmath>

#include <doctest.h>

#include "aspectlab/errors.hpp"
#include "aspectlab/learners.hpp"
#include "aspectlab/rng.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace aspectlab;
using namespace aspectlab::testing;

namespace {

/// Standardize like the model documents (sample sd, constants dropped) and
/// hand the design to the gradient-descent oracle.
GDOracleResult oracle_for(const std::vector<LabeledExample>& train, int d_used) {
  const auto n = train.size();
  std::vector<std::vector<double>> design(n);
  std::vector<double> y(n);
  std::vector<double> mean(d_used, 0.0), sd(d_used, 0.0);
  for (int j = 0; j < d_used; ++j) {
    double s = 0.0;
    for (const auto& ex : train) s += ex.x.values[j];
    mean[j] = s / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& ex : train) ss += std::pow(ex.x.values[j] - mean[j], 2);
    sd[j] = std::sqrt(ss / static_cast<double>(n - 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    design[i].push_back(1.0);
    for (int j = 0; j < d_used; ++j) {
      if (sd[j] > 0.0) design[i].push_back((train[i].x.values[j] - mean[j]) / sd[j]);
    }
    y[i] = train[i].y == Label::Event ? 1.0 : 0.0;
  }
  return gd_logistic_oracle(design, y);
}

std::vector<LabeledExample> random_noisy_dataset(SplitMix64& rng, std::size_t n, int d) {
  std::vector<double> w(d);
  for (auto& v : w) v = gaussian(rng) * 1.5;
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledExample ex;
    ex.verb_lemma = "v" + std::to_string(i);
    double z = 0.0;
    for (int j = 0; j < d; ++j) {
      ex.x.values[j] = gaussian(rng);
      z += w[j] * ex.x.values[j];
    }
    ex.y = rng.next_bernoulli(inverse_logit(z)) ? Label::Event : Label::State;
    out.push_back(std::move(ex));
  }
  return out;
}

double train_deviance(const LinearModel& m, const std::vector<LabeledExample>& train) {
  double ll = 0.0;
  for (const auto& ex : train) {
    const double p =
        std::min(1.0 - 1e-12, std::max(1e-12, loglinear_probability(m, ex.x)));
    ll += ex.y == Label::Event ? std::log(p) : std::log1p(-p);
  }
  return -2.0 * ll;
}

}  // namespace

TEST_SUITE("loglinear") {
  TEST_CASE("inverse logit") {
    CHECK(inverse_logit(0.0) == 0.5);
    CHECK(inverse_logit(2.0) == doctest::Approx(0.88079707797788244).epsilon(1e-14));
    SplitMix64 rng(4);
    for (int i = 0; i < 100; ++i) {
      const double z = (rng.next_unit() - 0.5) * 60.0;
      CHECK(inverse_logit(z) + inverse_logit(-z) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(inverse_logit(800.0) == 1.0);
    CHECK(inverse_logit(-800.0) >= 0.0);
    CHECK(std::isfinite(inverse_logit(-800.0)));
  }

  TEST_CASE("alternating 6-point set matches the gradient-descent oracle") {
    std::vector<LabeledExample> train;
    const Label pattern[] = {Label::Event, Label::State, Label::Event,
                             Label::State, Label::Event, Label::State};
    for (int i = 0; i < 6; ++i) {
      train.push_back(scalar_example(static_cast<double>(i), pattern[i]));
    }
    const LoglinearFit fit = fit_loglinear(train);
    CHECK_FALSE(fit.report.converged_by_cap);

    const GDOracleResult oracle = oracle_for(train, 1);
    CHECK(std::fabs(fit.report.deviance_trace.back() - oracle.deviance) < 1e-4);
    CHECK(std::fabs(train_deviance(fit.model, train) - oracle.deviance) < 1e-4);
  }

  TEST_CASE("deviance never increases across iterations") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const auto train = random_noisy_dataset(rng, 40 + rng.next_below(100),
                                              1 + static_cast<int>(rng.next_below(6)));
      const LoglinearFit fit = fit_loglinear(train);
      const auto& trace = fit.report.deviance_trace;
      for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] <= trace[i - 1] + 1e-9);
      }
    }
  }

  TEST_CASE("random non-separable datasets match the oracle deviance") {
    SplitMix64 rng(1234);
    int tested = 0;
    while (tested < 10) {
      const int d = 1 + static_cast<int>(rng.next_below(5));
      const auto train = random_noisy_dataset(rng, 50 + rng.next_below(80), d);
      const LoglinearFit fit = fit_loglinear(train);
      if (fit.report.converged_by_cap) continue;  // separated draw, skip
      const GDOracleResult oracle = oracle_for(train, d);
      CHECK(std::fabs(fit.report.deviance_trace.back() - oracle.deviance) < 1e-4);
      ++tested;
    }
  }

  TEST_CASE("mirror-symmetric data pins the intercept at zero") {
    std::vector<LabeledExample> train;
    for (const double x : {0.5, 1.0, 2.0, 3.5}) {
      train.push_back(scalar_example(x, Label::Event));
      train.push_back(scalar_example(-x, Label::State));
    }
    const LoglinearFit fit = fit_loglinear(train);
    CHECK(std::fabs(fit.model.intercept) < 1e-6);
  }

  TEST_CASE("constant features get weight exactly zero") {
    SplitMix64 rng(55);
    auto train = random_noisy_dataset(rng, 80, 3);
    for (auto& ex : train) ex.x.values[7] = 42.0;  // constant column
    const LoglinearFit fit = fit_loglinear(train);
    CHECK(fit.model.weights[7] == 0.0);
    CHECK(fit.model.feature_sds[7] == 1.0);
  }

  TEST_CASE("separable data trips the quasi-separation cap") {
    std::vector<LabeledExample> train;
    for (int i = 0; i < 12; ++i) {
      train.push_back(
          scalar_example(static_cast<double>(i), i < 6 ? Label::State : Label::Event));
    }
    const LoglinearFit fit = fit_loglinear(train);
    CHECK(fit.model.converged_by_cap);
    // frozen threshold still classifies the training set perfectly
    std::size_t correct = 0;
    for (const auto& ex : train) correct += predict_loglinear(fit.model, ex.x) == ex.y;
    CHECK(correct == train.size());
  }

  TEST_CASE("scaling a feature by a power of two leaves predictions unchanged") {
    SplitMix64 rng(91);
    const auto train = random_noisy_dataset(rng, 120, 4);
    auto scaled = train;
    for (auto& ex : scaled) ex.x.values[2] *= 4.0;
    const LinearModel base = fit_loglinear(train).model;
    const LinearModel rescaled = fit_loglinear(scaled).model;
    for (std::size_t i = 0; i < train.size(); ++i) {
      CHECK(predict_loglinear(base, train[i].x) == predict_loglinear(rescaled, scaled[i].x));
    }
  }

  TEST_CASE("frozen threshold beats or ties the plain 0.5 cut on training data") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 8; ++trial) {
      const auto train = random_noisy_dataset(rng, 60 + rng.next_below(60), 3);
      const LinearModel m = fit_loglinear(train).model;
      CHECK(m.output_threshold > 0.0);
      CHECK(m.output_threshold < 1.0);
      std::size_t frozen = 0, plain = 0;
      for (const auto& ex : train) {
        const double p = loglinear_probability(m, ex.x);
        frozen += (p >= m.output_threshold ? Label::Event : Label::State) == ex.y;
        plain += (p >= 0.5 ? Label::Event : Label::State) == ex.y;
      }
      CHECK(frozen >= plain);
    }
  }

  TEST_CASE("fixed-model boundary semantics") {
    LinearModel m;  // all-zero weights, intercept 0 -> probability exactly 0.5
    m.feature_sds.fill(1.0);
    IndicatorVector x;
    m.output_threshold = 0.5;
    CHECK(loglinear_probability(m, x) == 0.5);
    CHECK(predict_loglinear(m, x) == Label::Event);  // boundary goes to Event
    m.output_threshold = 1.0;
    CHECK(predict_loglinear(m, x) == Label::State);
  }

  TEST_CASE("error contracts") {
    CHECK_THROWS_AS(fit_loglinear({}), EmptyTrainingSetError);
    std::vector<LabeledExample> one_class = {scalar_example(1.0, Label::Event),
                                             scalar_example(2.0, Label::Event)};
    CHECK_THROWS_AS(fit_loglinear(one_class), SingleClassTrainingError);
  }
}
