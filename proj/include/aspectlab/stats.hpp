#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aspectlab/clause.hpp"

namespace aspectlab {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  // set when both samples are constant, where t/df lose meaning and p is
  // fixed by convention (equal means -> 1, unequal -> 0)
  bool degenerate = false;
};

/// Welch's unequal-variance two-sample t test with Welch-Satterthwaite
/// degrees of freedom and a two-sided p-value. Each sample needs >= 2
/// elements.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Regularized incomplete beta I_x(a,b), evaluated with the continued
/// fraction of Lentz's method (symmetry-flipped for convergence), accurate
/// to ~1e-14. Used for Student-t tail probabilities.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p for a t statistic: I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

enum class TailSide { Greater, Less, TwoSided };

/// Exact binomial tail probability, summed in log space. TwoSided doubles
/// the smaller tail and caps at 1.
double exact_binomial_test(std::uint64_t successes, std::uint64_t trials,
                           double p0, TailSide side);

struct McNemarResult {
  double p = 1.0;
  std::uint64_t n_disagreements = 0;
  std::uint64_t b = 0;  // first-correct, second-wrong
  std::uint64_t c = 0;  // second-correct, first-wrong
};

/// Exact McNemar construction: restrict to examples where exactly one model
/// is correct and test b against Binomial(b+c, 1/2), upper tail. No
/// disagreements gives p = 1.
McNemarResult paired_significance(std::span<const Label> m1_predictions,
                                  std::span<const Label> m2_predictions,
                                  std::span<const Label> gold);

}  // namespace aspectlab
