#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "aspectlab/clause.hpp"
#include "aspectlab/indicators.hpp"

namespace aspectlab {

struct LabeledExample {
  std::string verb_lemma;
  IndicatorVector x;
  Label y = Label::Unlabeled;  // State or Event after construction
};

/// Pairs each labeled clause with its verb's indicator vector. Unlabeled
/// records raise UnlabeledRecordError; verbs missing from `vectors` get the
/// all-zero vector.
std::vector<LabeledExample> make_examples(const ClauseSet& cs,
                                          const VerbVectors& vectors);

// ---------------------------------------------------------------------------
// Single-indicator threshold models
// ---------------------------------------------------------------------------

enum class StateSide : std::uint8_t { AtOrAbove, Below };

struct ThresholdModel {
  int indicator_index = 0;
  double threshold = 0.0;  // may be +-infinity
  StateSide state_side = StateSide::AtOrAbove;

  bool operator==(const ThresholdModel&) const = default;
};

Label predict_threshold(const ThresholdModel& m, const IndicatorVector& x);

struct ThresholdFit {
  ThresholdModel model;
  double train_accuracy = 0.0;
};

/// Scores every midpoint between consecutive distinct indicator values plus
/// -inf and +inf, in both directions; ties go to the smaller threshold, then
/// to AtOrAbove.
ThresholdFit fit_threshold(const std::vector<LabeledExample>& train,
                           int indicator_index);

/// Weighted scalar form of the same search, shared with the GP fitness
/// function and the output-threshold freezing steps.
struct ScalarPoint {
  double value = 0.0;
  double w_state = 0.0;
  double w_event = 0.0;
};

struct ScalarThresholdFit {
  double threshold = 0.0;
  StateSide side = StateSide::AtOrAbove;
  double accuracy = 0.0;
};

ScalarThresholdFit fit_scalar_threshold(std::vector<ScalarPoint> points);

// ---------------------------------------------------------------------------
// Log-linear regression (IRLS)
// ---------------------------------------------------------------------------

struct LinearModel {
  std::array<double, kNumIndicators> weights{};
  double intercept = 0.0;
  std::array<double, kNumIndicators> feature_means{};
  std::array<double, kNumIndicators> feature_sds{};  // constant features get 1
  double output_threshold = 0.5;                     // in (0,1)
  bool converged_by_cap = false;
};

double inverse_logit(double z);

/// Event probability for one vector (standardize, dot, inverse logit).
double loglinear_probability(const LinearModel& m, const IndicatorVector& x);

/// Event iff probability >= output_threshold.
Label predict_loglinear(const LinearModel& m, const IndicatorVector& x);

struct LoglinearFitReport {
  std::vector<double> deviance_trace;  // deviance after each iteration, [0] = start
  int iterations = 0;
  bool converged_by_cap = false;
  bool ridge_used = false;
};

struct LoglinearFit {
  LinearModel model;
  LoglinearFitReport report;
};

/// Newton/IRLS on the binomial deviance over standardized features, with
/// step halving so the deviance never increases, a 1e-8 ridge fallback for
/// singular systems, and a |w| > 15 quasi-separation cap. The output
/// threshold is then frozen by the training-accuracy search over fitted
/// probabilities.
LoglinearFit fit_loglinear(const std::vector<LabeledExample>& train,
                           int max_iter = 25, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Genetic programming over function trees
// ---------------------------------------------------------------------------

struct TreeNode {
  enum class Op : std::uint8_t { Add, Mul, Div, Terminal };
  Op op = Op::Terminal;
  int terminal = 0;  // indicator index when op == Terminal
  std::unique_ptr<TreeNode> left, right;
};

std::unique_ptr<TreeNode> clone_tree(const TreeNode& n);
int tree_depth(const TreeNode& n);   // single node = depth 0
int tree_size(const TreeNode& n);

/// Tree evaluation yields this sentinel (the lowest finite double) whenever
/// arithmetic leaves the finite range; it sorts below every ordinary output.
double tree_eval_sentinel();

struct FunctionTree {
  std::unique_ptr<TreeNode> root;
  std::array<int, kNumIndicators> polarity{};  // +1 / -1 per terminal
  double output_threshold = 0.0;
  StateSide state_side = StateSide::AtOrAbove;

  FunctionTree();
  FunctionTree(const FunctionTree& other);
  FunctionTree& operator=(const FunctionTree& other);
  FunctionTree(FunctionTree&&) noexcept = default;
  FunctionTree& operator=(FunctionTree&&) noexcept = default;
  ~FunctionTree() = default;
};

/// Recursive evaluation. Terminals yield polarity_i * x_i; DIV is protected
/// (a/b = 1 when |b| < 1e-12); non-finite results become the sentinel.
double eval_tree(const FunctionTree& t, const IndicatorVector& x);

Label predict_gp(const FunctionTree& t, const IndicatorVector& x);

struct GPConfig {
  std::uint32_t population_size = 500;
  std::uint64_t evaluation_budget = 50000;  // counts initial population too
  std::uint64_t seed = 0;
  int max_depth = 17;
  int init_depth_min = 2;
  int init_depth_max = 6;
  double crossover_prob = 0.9;
  double mutation_prob = 0.1;
  int tournament_size = 7;
  int mutation_grow_depth = 4;
};

struct GPFit {
  FunctionTree tree;
  double train_accuracy = 0.0;
  std::uint64_t evaluations = 0;
  std::vector<double> best_by_generation;
};

/// Ramped half-and-half initialization (the first 14 individuals are the 14
/// single-terminal trees), tournament selection, subtree crossover/mutation,
/// depth-capped offspring, best-ever elitism. Fitness is the best threshold
/// accuracy over tree outputs on the training set. Deterministic per seed
/// and thread count.
GPFit gp_evolve(const std::vector<LabeledExample>& train, const GPConfig& cfg,
                const std::array<int, kNumIndicators>& polarity);

/// Polarity convention for gp_evolve: the sign of each fitted linear weight,
/// +1 where a weight is zero.
std::array<int, kNumIndicators> polarity_from_linear(const LinearModel& m);

// ---------------------------------------------------------------------------
// Decision trees (recursive partitioning, deviance criterion)
// ---------------------------------------------------------------------------

struct DecisionTreeNode {
  bool is_leaf = true;
  // split fields (left: x < split_value, right: x >= split_value)
  int indicator_index = 0;
  double split_value = 0.0;
  int left = -1;
  int right = -1;
  // leaf fields
  Label label = Label::Event;
  std::uint64_t n_state = 0;
  std::uint64_t n_event = 0;
};

struct DecisionTree {
  std::vector<DecisionTreeNode> nodes;  // nodes[0] is the root
};

struct TreeGrowConfig {
  std::uint64_t min_node_size = 10;      // smallest allowed child
  double min_deviance_fraction = 0.01;   // of root deviance
  int max_depth = 31;
};

/// Top-down growth choosing the deviance-maximizing (indicator, midpoint)
/// split at every node; ties go to the lowest indicator index, then the
/// smallest split value. Leaves are labeled by majority, ties -> Event.
DecisionTree fit_decision_tree(const std::vector<LabeledExample>& train,
                               const TreeGrowConfig& cfg = {});

Label predict_decision_tree(const DecisionTree& t, const IndicatorVector& x);

// ---------------------------------------------------------------------------
// Model variant
// ---------------------------------------------------------------------------

using Model = std::variant<ThresholdModel, LinearModel, FunctionTree, DecisionTree>;

Label predict(const Model& m, const IndicatorVector& x);

std::string_view model_kind(const Model& m);  // threshold/loglinear/gptree/dtree

}  // namespace aspectlab
