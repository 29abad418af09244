#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "aspectlab/errors.hpp"
#include "aspectlab/learners.hpp"

namespace aspectlab {

namespace {

constexpr double kWeightCap = 15.0;
constexpr double kRidge = 1e-8;
constexpr double kProbClamp = 1e-12;

double deviance(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = design * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double mu = std::clamp(inverse_logit(eta[i]), kProbClamp, 1.0 - kProbClamp);
    ll += y[i] * std::log(mu) + (1.0 - y[i]) * std::log1p(-mu);
  }
  return -2.0 * ll;
}

/// Training-accuracy search over fitted probabilities for the rule
/// "Event iff p >= t". The model stores no direction, so unlike the generic
/// threshold search this one is single-sided, and the returned cut is kept
/// inside (0,1): an all-Event optimum returns the smallest probability, an
/// all-State optimum the midpoint between the largest probability and 1.
double fit_probability_threshold(std::vector<ScalarPoint> points) {
  std::sort(points.begin(), points.end(),
            [](const ScalarPoint& a, const ScalarPoint& b) { return a.value < b.value; });
  std::vector<ScalarPoint> distinct;
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

  const std::size_t m = distinct.size();
  double best_acc = -1.0;
  double best_threshold = 0.5;
  double state_below = 0.0, event_below = 0.0;
  for (std::size_t k = 0; k <= m; ++k) {
    double threshold;
    if (k == 0) threshold = distinct.front().value;  // everything Event
    else if (k == m) threshold = (distinct.back().value + 1.0) / 2.0;  // everything State
    else threshold = (distinct[k - 1].value + distinct[k].value) / 2.0;

    // below the cut -> State, at or above -> Event
    const double acc = (state_below + (total_event - event_below)) /
                       (total_state + total_event);
    if (acc > best_acc) {
      best_acc = acc;
      best_threshold = threshold;
    }
    if (k < m) {
      state_below += distinct[k].w_state;
      event_below += distinct[k].w_event;
    }
  }
  return best_threshold;
}

}  // namespace

double inverse_logit(double z) {
  // evaluate through exp(-|z|) so neither branch can overflow
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double loglinear_probability(const LinearModel& m, const IndicatorVector& x) {
  double z = m.intercept;
  for (int i = 0; i < kNumIndicators; ++i) {
    z += m.weights[i] * (x.values[i] - m.feature_means[i]) / m.feature_sds[i];
  }
  return inverse_logit(z);
}

Label predict_loglinear(const LinearModel& m, const IndicatorVector& x) {
  return loglinear_probability(m, x) >= m.output_threshold ? Label::Event : Label::State;
}

LoglinearFit fit_loglinear(const std::vector<LabeledExample>& train, int max_iter,
                           double tol) {
  if (train.empty()) throw EmptyTrainingSetError();
  const auto n = static_cast<Eigen::Index>(train.size());
  bool has_state = false, has_event = false;
  for (const auto& ex : train) {
    (ex.y == Label::State ? has_state : has_event) = true;
  }
  if (!has_state || !has_event) throw SingleClassTrainingError();

  LoglinearFit fit;
  LinearModel& model = fit.model;

  // standardization constants; constant features keep sd 1 and stay out of
  // the solved system so their weight is exactly zero
  std::array<bool, kNumIndicators> active{};
  for (int j = 0; j < kNumIndicators; ++j) {
    double sum = 0.0;
    for (const auto& ex : train) sum += ex.x.values[j];
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& ex : train) {
      ss += (ex.x.values[j] - mu) * (ex.x.values[j] - mu);
    }
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    model.feature_means[j] = mu;
    model.feature_sds[j] = sd > 0.0 ? sd : 1.0;
    active[j] = sd > 0.0;
  }

  std::vector<int> cols;
  for (int j = 0; j < kNumIndicators; ++j) {
    if (active[j]) cols.push_back(j);
  }
  const auto d = static_cast<Eigen::Index>(cols.size()) + 1;  // + intercept

  Eigen::MatrixXd design(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const int j = cols[c];
      design(i, static_cast<Eigen::Index>(c) + 1) =
          (train[static_cast<std::size_t>(i)].x.values[j] - model.feature_means[j]) /
          model.feature_sds[j];
    }
    y[i] = train[static_cast<std::size_t>(i)].y == Label::Event ? 1.0 : 0.0;
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  double dev = deviance(design, y, beta);
  fit.report.deviance_trace.push_back(dev);

  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd eta = design * beta;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu[i] = inverse_logit(eta[i]);
      w[i] = std::max(mu[i] * (1.0 - mu[i]), 1e-10);
    }
    const Eigen::MatrixXd xtw = design.transpose() * w.asDiagonal();
    Eigen::MatrixXd hess = xtw * design;
    const Eigen::VectorXd grad = design.transpose() * (y - mu);

    Eigen::VectorXd delta;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) {
      delta = ldlt.solve(grad);
      ok = delta.allFinite();
    }
    if (!ok) {
      // singular system: retry with a small ridge on the normal equations
      fit.report.ridge_used = true;
      hess.diagonal().array() += kRidge;
      delta = Eigen::LDLT<Eigen::MatrixXd>(hess).solve(grad);
      if (!delta.allFinite()) break;
    }

    // step halving keeps the deviance non-increasing
    double step = 1.0;
    Eigen::VectorXd candidate;
    double new_dev = dev;
    for (int half = 0; half < 40; ++half) {
      candidate = beta + step * delta;
      new_dev = deviance(design, y, candidate);
      if (new_dev <= dev) break;
      step /= 2.0;
    }
    if (new_dev > dev) break;  // no progress possible
    beta = candidate;
    fit.report.deviance_trace.push_back(new_dev);
    ++fit.report.iterations;

    const double rel = std::fabs(dev - new_dev) / (std::fabs(new_dev) + 1e-10);
    dev = new_dev;

    if (beta.tail(d - 1).lpNorm<Eigen::Infinity>() > kWeightCap) {
      fit.report.converged_by_cap = true;  // quasi-separation
      break;
    }
    if (rel < tol) break;
  }

  model.intercept = beta[0];
  for (std::size_t c = 0; c < cols.size(); ++c) {
    model.weights[cols[c]] = beta[static_cast<Eigen::Index>(c) + 1];
  }
  model.converged_by_cap = fit.report.converged_by_cap;

  // freeze the output threshold on training probabilities
  std::vector<ScalarPoint> points;
  points.reserve(train.size());
  for (const auto& ex : train) {
    points.push_back({loglinear_probability(model, ex.x),
                      ex.y == Label::State ? 1.0 : 0.0,
                      ex.y == Label::Event ? 1.0 : 0.0});
  }
  model.output_threshold = fit_probability_threshold(std::move(points));
  return fit;
}

std::array<int, kNumIndicators> polarity_from_linear(const LinearModel& m) {
  std::array<int, kNumIndicators> polarity;
  for (int i = 0; i < kNumIndicators; ++i) {
    polarity[i] = m.weights[i] < 0.0 ? -1 : 1;
  }
  return polarity;
}

}  // namespace aspectlab
