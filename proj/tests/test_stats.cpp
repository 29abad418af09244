#include <cmath>
#include <vector>

#include <doctest.h>

#include "aspectlab/errors.hpp"
#include "aspectlab/rng.hpp"
#include "aspectlab/stats.hpp"
#include "oracles.hpp"

using namespace aspectlab;
using namespace aspectlab::testing;

namespace {

struct WelchCase {
  const char* name;
  std::vector<double> a;
  std::vector<double> b;
  double t;
  double df;
  double p;
};

// Frozen against a 40-digit mpmath evaluation of the Welch statistic,
// Welch-Satterthwaite degrees of freedom and the regularized-beta t tail.
const std::vector<WelchCase>& welch_cases() {
  // clang-format off
  static const std::vector<WelchCase> cases = {
    {"spec_1to5_vs_2to6", {1.0, 2.0, 3.0, 4.0, 5.0}, {2.0, 3.0, 4.0, 5.0, 6.0},
     -1.0, 8.0, 0.34659350708733425},
    {"identical_123", {1.0, 2.0, 3.0}, {1.0, 2.0, 3.0},
     0.0, 4.0, 1.0},
    {"small_shift", {1.0, 1.1, 0.9, 1.2}, {1.3, 1.5, 1.4, 1.6},
     -4.3817804600413286, 6.0, 0.004659214943993936},
    {"unequal_var", {10.0, 12.0, 8.0, 11.0, 9.0, 10.5}, {20.0, 5.0, 30.0, -2.0, 14.0},
     -0.5890745933609071, 4.0868915612904781, 0.58683533066139769},
    {"tiny_n2", {0.0, 1.0}, {2.0, 3.0},
     -2.8284271247461901, 2.0, 0.10557280900008412},
    {"big_sep", {0.0, 0.1, -0.1, 0.05, -0.05}, {10.0, 10.2, 9.8, 10.1, 9.9},
     -126.49110640673553, 5.8823529411764826, 2.4929286941353352e-11},
    {"overlap", {1.0, 4.0, 2.0, 8.0, 5.0, 7.0, 3.0}, {2.0, 6.0, 3.0, 9.0, 4.0, 8.0, 5.0},
     -0.72980044919976167, 12.0, 0.47951671377262198},
    {"neg_values", {-5.0, -3.0, -4.0, -6.0}, {-1.0, -2.0, -1.5},
     -4.2426406871192851, 4.0754716981132075, 0.012717594465315203},
    {"one_const", {2.0, 2.0, 2.0, 2.0}, {1.0, 2.0, 3.0},
     0.0, 2.0, 1.0},
    {"wide_vs_tight", {100.0, 200.0, 150.0, 175.0, 125.0}, {148.0, 152.0, 150.0, 149.0, 151.0},
     0.0, 4.0127999672320839, 1.0},
    {"n_mismatch", {3.2, 3.8, 3.5, 3.1, 3.9, 3.4, 3.6, 3.3}, {3.7, 4.1},
     -1.9023570729271432, 1.5433893408991658, 0.23354608490237529},
    {"decimals", {0.01, 0.02, 0.015}, {0.02, 0.03, 0.025, 0.035},
     -2.8867513459481288, 4.9591836734693878, 0.034647553288285727},
    {"spread10", {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0},
     {0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5, 9.5},
     -0.3692744729379982, 18.0, 0.71623138331641807},
    {"alternating", {1.0, -1.0, 1.0, -1.0, 1.0}, {0.5, -0.5, 0.5, -0.5},
     0.3517262290563295, 6.2545978284954576, 0.73659151133834541},
    {"rates_like", {4.4, 4.5, 4.3, 4.6, 4.2, 4.45}, {1.5, 1.6, 1.4, 1.7, 1.55},
     37.203573515899547, 8.9840835613031592, 3.7536135444518278e-11},
    {"close_means", {5.0, 5.1, 4.9, 5.05}, {5.02, 5.08, 4.95, 5.06},
     -0.2916151060537495, 5.2500406878967117, 0.78175423489498158},
    {"heavy_tail", {1.0, 1.0, 1.0, 1.0, 50.0}, {2.0, 2.0, 2.0, 2.0, 2.5},
     0.88770888766237637, 4.0008329862466958, 0.4248427491164546},
    {"percent_scale", {36.0, 36.1, 35.9, 36.05}, {57.5, 57.6, 57.4, 57.55},
     -356.07382862065188, 6.0, 3.3113836440938188e-14},
    {"df_large",
     {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23,
      24, 25, 26, 27, 28, 29, 30},
     {1.8, 2.8, 3.8, 4.8, 5.8, 6.8, 7.8, 8.8, 9.8, 10.8, 11.8, 12.8, 13.8, 14.8, 15.8,
      16.8, 17.8, 18.8, 19.8, 20.8, 21.8, 22.8, 23.8, 24.8, 25.8, 26.8, 27.8, 28.8, 29.8,
      30.8},
     -0.35195307605124811, 58.0, 0.72614901869361313},
    {"asym_counts", {2.27, 2.3, 2.25, 2.28, 2.26, 2.29, 2.24}, {3.44, 3.4, 3.48},
     -47.765049984271955, 2.5181347150259017, 8.6208986965445553e-5},
  };
  // clang-format on
  return cases;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("welch matches the high-precision reference table") {
    for (const auto& c : welch_cases()) {
      CAPTURE(c.name);
      const WelchResult r = welch_t_test(c.a, c.b);
      CHECK(r.t == doctest::Approx(c.t).epsilon(1e-12));
      CHECK(r.df == doctest::Approx(c.df).epsilon(1e-12));
      CHECK(std::fabs(r.p - c.p) < 1e-9);
      CHECK_FALSE(r.degenerate);
    }
  }

  TEST_CASE("welch identical samples give t 0 and p 1") {
    const std::vector<double> s = {1, 2, 3};
    const WelchResult r = welch_t_test(s, s);
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
  }

  TEST_CASE("welch degenerate conventions for two constant samples") {
    const std::vector<double> a = {2, 2, 2};
    SUBCASE("equal means") {
      const WelchResult r = welch_t_test(a, a);
      CHECK(r.degenerate);
      CHECK(r.p == 1.0);
      CHECK(r.t == 0.0);
    }
    SUBCASE("unequal means") {
      const std::vector<double> b = {3, 3, 3};
      const WelchResult r = welch_t_test(a, b);
      CHECK(r.degenerate);
      CHECK(r.p == 0.0);
    }
  }

  TEST_CASE("welch rejects undersized samples") {
    const std::vector<double> one = {1.0};
    const std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(welch_t_test(one, two), SampleTooSmallError);
    CHECK_THROWS_AS(welch_t_test(two, one), SampleTooSmallError);
  }

  TEST_CASE("welch symmetry and location/scale invariance") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> a, b;
      const auto na = 2 + rng.next_below(10);
      const auto nb = 2 + rng.next_below(10);
      for (std::uint64_t i = 0; i < na; ++i) a.push_back(rng.next_unit() * 10.0);
      for (std::uint64_t i = 0; i < nb; ++i) b.push_back(rng.next_unit() * 10.0 + 1.0);

      const WelchResult fwd = welch_t_test(a, b);
      const WelchResult rev = welch_t_test(b, a);
      CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-12));
      CHECK(fwd.p == doctest::Approx(rev.p).epsilon(1e-12));
      CHECK(fwd.df == doctest::Approx(rev.df).epsilon(1e-12));

      std::vector<double> a2 = a, b2 = b;
      for (auto& x : a2) x = x * 4.0 + 7.0;
      for (auto& x : b2) x = x * 4.0 + 7.0;
      const WelchResult moved = welch_t_test(a2, b2);
      CHECK(moved.t == doctest::Approx(fwd.t).epsilon(1e-9));
      CHECK(moved.p == doctest::Approx(fwd.p).epsilon(1e-9));
    }
  }

  TEST_CASE("incomplete beta basics") {
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
      const double a = 0.5 + rng.next_unit() * 20.0;
      const double b = 0.5 + rng.next_unit() * 20.0;
      const double x = rng.next_unit();
      const double lhs = regularized_incomplete_beta(a, b, x);
      const double rhs = regularized_incomplete_beta(b, a, 1.0 - x);
      CHECK(std::fabs(lhs + rhs - 1.0) < 1e-12);
    }
  }

  TEST_CASE("exact binomial closed forms") {
    CHECK(exact_binomial_test(12, 12, 0.5, TailSide::Greater) ==
          doctest::Approx(0.000244140625).epsilon(1e-12));
    CHECK(exact_binomial_test(6, 12, 0.5, TailSide::Greater) ==
          doctest::Approx(0.61279296875).epsilon(1e-12));
    CHECK(exact_binomial_test(0, 10, 0.5, TailSide::Less) ==
          doctest::Approx(0.0009765625).epsilon(1e-12));
  }

  TEST_CASE("exact binomial matches direct enumeration for n <= 20") {
    for (std::uint64_t n = 1; n <= 20; ++n) {
      for (std::uint64_t k = 0; k <= n; ++k) {
        for (const double p0 : {0.3, 0.5, 0.77}) {
          const double greater = exact_binomial_test(k, n, p0, TailSide::Greater);
          const double less = exact_binomial_test(k, n, p0, TailSide::Less);
          const double two = exact_binomial_test(k, n, p0, TailSide::TwoSided);
          CHECK(std::fabs(greater - enumerate_binomial_tail(k, n, n, p0)) < 1e-12);
          CHECK(std::fabs(less - enumerate_binomial_tail(0, k, n, p0)) < 1e-12);
          CHECK(two == doctest::Approx(std::min(1.0, 2.0 * std::min(greater, less)))
                           .epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("binomial tail identity: greater(k) + less(k-1) = 1") {
    for (std::uint64_t n = 1; n <= 20; ++n) {
      for (std::uint64_t k = 1; k <= n; ++k) {
        const double s = exact_binomial_test(k, n, 0.5, TailSide::Greater) +
                         exact_binomial_test(k - 1, n, 0.5, TailSide::Less);
        CHECK(std::fabs(s - 1.0) < 1e-12);
      }
    }
  }

  TEST_CASE("exact binomial domain errors") {
    CHECK_THROWS_AS(exact_binomial_test(1, 0, 0.5, TailSide::Greater), DomainError);
    CHECK_THROWS_AS(exact_binomial_test(5, 4, 0.5, TailSide::Greater), DomainError);
    CHECK_THROWS_AS(exact_binomial_test(1, 4, 0.0, TailSide::Greater), DomainError);
    CHECK_THROWS_AS(exact_binomial_test(1, 4, 1.0, TailSide::Greater), DomainError);
  }

  TEST_CASE("mcnemar closed forms") {
    // b = 10, c = 2: upper tail of Binomial(12, 1/2) at 10 = 79/4096
    std::vector<Label> gold, m1, m2;
    auto push = [&](bool ok1, bool ok2, int times) {
      for (int i = 0; i < times; ++i) {
        gold.push_back(Label::Event);
        m1.push_back(ok1 ? Label::Event : Label::State);
        m2.push_back(ok2 ? Label::Event : Label::State);
      }
    };
    push(true, false, 10);
    push(false, true, 2);
    push(true, true, 30);
    const McNemarResult r = paired_significance(m1, m2, gold);
    CHECK(r.b == 10);
    CHECK(r.c == 2);
    CHECK(r.n_disagreements == 12);
    CHECK(r.p == doctest::Approx(79.0 / 4096.0).epsilon(1e-12));

    const McNemarResult swapped = paired_significance(m2, m1, gold);
    CHECK(swapped.b == 2);
    CHECK(swapped.c == 10);
    CHECK(swapped.p ==
          doctest::Approx(enumerate_binomial_tail(2, 12, 12, 0.5)).epsilon(1e-12));
  }

  TEST_CASE("mcnemar degenerate cases") {
    std::vector<Label> gold = {Label::Event, Label::State, Label::Event};
    SUBCASE("identical predictions") {
      const McNemarResult r = paired_significance(gold, gold, gold);
      CHECK(r.p == 1.0);
      CHECK(r.n_disagreements == 0);
    }
    SUBCASE("b = 0 covers the whole upper tail") {
      std::vector<Label> m1 = {Label::State, Label::Event, Label::State};  // all wrong
      const McNemarResult r = paired_significance(m1, gold, gold);
      CHECK(r.b == 0);
      CHECK(r.c == 3);
      CHECK(r.p == 1.0);
    }
    SUBCASE("length mismatch") {
      std::vector<Label> shorter = {Label::Event};
      CHECK_THROWS_AS(paired_significance(shorter, gold, gold), LengthMismatchError);
    }
  }
}
