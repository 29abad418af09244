#include "aspectlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aspectlab/errors.hpp"

namespace aspectlab {

namespace {

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Continued fraction for the regularized incomplete beta, modified Lentz.
// Evaluates the standard expansion
//   I_x(a,b) = front * (1/a) * [1/(1+ d1/(1+ d2/(1+ ...)))]
// with d_{2m}   =  m(b-m)x / ((a+2m-1)(a+2m))
//      d_{2m+1} = -(a+m)(a+b+m)x / ((a+2m)(a+2m+1)).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta: a,b must be > 0");
  if (std::isnan(x)) throw DomainError("incomplete beta: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // Use the expansion on whichever side converges fast, flip otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw DomainError("t distribution: df must be > 0");
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw SampleTooSmallError();
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_variance(a, ma);
  const double vb = sample_variance(b, mb);

  WelchResult r;
  const double se2 = va / na + vb / nb;
  if (se2 <= 0.0) {
    // Both samples constant: p by convention.
    r.degenerate = true;
    if (ma == mb) {
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = ma < mb ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    r.df = 0.0;
    return r;
  }
  r.t = (ma - mb) / std::sqrt(se2);
  const double ta = (va / na) * (va / na) / (na - 1.0);
  const double tb = (vb / nb) * (vb / nb) / (nb - 1.0);
  r.df = se2 * se2 / (ta + tb);
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

double exact_binomial_test(std::uint64_t successes, std::uint64_t trials,
                           double p0, TailSide side) {
  if (trials == 0) throw DomainError("binomial test: trials must be >= 1");
  if (successes > trials) throw DomainError("binomial test: successes > trials");
  if (!(p0 > 0.0) || !(p0 < 1.0)) throw DomainError("binomial test: p0 must be in (0,1)");

  const auto n = static_cast<double>(trials);
  const double lp = std::log(p0);
  const double lq = std::log1p(-p0);
  auto log_pmf = [&](std::uint64_t k) {
    const auto kd = static_cast<double>(k);
    return std::lgamma(n + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(n - kd + 1.0) +
           kd * lp + (n - kd) * lq;
  };
  // log-sum-exp over an inclusive range of k
  auto tail = [&](std::uint64_t lo, std::uint64_t hi) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::uint64_t k = lo; k <= hi; ++k) mx = std::max(mx, log_pmf(k));
    double s = 0.0;
    for (std::uint64_t k = lo; k <= hi; ++k) s += std::exp(log_pmf(k) - mx);
    return std::min(1.0, std::exp(mx) * s);
  };

  switch (side) {
    case TailSide::Greater:
      return tail(successes, trials);
    case TailSide::Less:
      return tail(0, successes);
    case TailSide::TwoSided: {
      const double hi = tail(successes, trials);
      const double lo = tail(0, successes);
      return std::min(1.0, 2.0 * std::min(lo, hi));
    }
  }
  throw DomainError("binomial test: bad side");
}

McNemarResult paired_significance(std::span<const Label> m1_predictions,
                                  std::span<const Label> m2_predictions,
                                  std::span<const Label> gold) {
  if (m1_predictions.size() != gold.size() || m2_predictions.size() != gold.size()) {
    throw LengthMismatchError("paired_significance: prediction/gold lengths differ");
  }
  if (gold.empty()) throw LengthMismatchError("paired_significance: empty inputs");

  McNemarResult r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool ok1 = m1_predictions[i] == gold[i];
    const bool ok2 = m2_predictions[i] == gold[i];
    if (ok1 && !ok2) ++r.b;
    if (ok2 && !ok1) ++r.c;
  }
  r.n_disagreements = r.b + r.c;
  r.p = r.n_disagreements == 0
            ? 1.0
            : exact_binomial_test(r.b, r.n_disagreements, 0.5, TailSide::Greater);
  return r;
}

}  // namespace aspectlab
