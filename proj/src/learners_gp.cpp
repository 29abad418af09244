#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "aspectlab/errors.hpp"
#include "aspectlab/learners.hpp"
#include "aspectlab/parallel.hpp"
#include "aspectlab/rng.hpp"

namespace aspectlab {

// --------------------------------------------------------------------------
// Tree plumbing
// --------------------------------------------------------------------------

std::unique_ptr<TreeNode> clone_tree(const TreeNode& n) {
  auto out = std::make_unique<TreeNode>();
  out->op = n.op;
  out->terminal = n.terminal;
  if (n.left) out->left = clone_tree(*n.left);
  if (n.right) out->right = clone_tree(*n.right);
  return out;
}

int tree_depth(const TreeNode& n) {
  if (n.op == TreeNode::Op::Terminal) return 0;
  return 1 + std::max(tree_depth(*n.left), tree_depth(*n.right));
}

int tree_size(const TreeNode& n) {
  if (n.op == TreeNode::Op::Terminal) return 1;
  return 1 + tree_size(*n.left) + tree_size(*n.right);
}

double tree_eval_sentinel() { return std::numeric_limits<double>::lowest(); }

FunctionTree::FunctionTree() { polarity.fill(1); }

FunctionTree::FunctionTree(const FunctionTree& other)
    : root(other.root ? clone_tree(*other.root) : nullptr),
      polarity(other.polarity),
      output_threshold(other.output_threshold),
      state_side(other.state_side) {}

FunctionTree& FunctionTree::operator=(const FunctionTree& other) {
  if (this != &other) {
    root = other.root ? clone_tree(*other.root) : nullptr;
    polarity = other.polarity;
    output_threshold = other.output_threshold;
    state_side = other.state_side;
  }
  return *this;
}

namespace {

constexpr double kDivEpsilon = 1e-12;

double eval_node(const TreeNode& n, const IndicatorVector& x,
                 const std::array<int, kNumIndicators>& polarity) {
  const double sentinel = tree_eval_sentinel();
  switch (n.op) {
    case TreeNode::Op::Terminal:
      return polarity[n.terminal] * x.values[n.terminal];
    case TreeNode::Op::Add:
    case TreeNode::Op::Mul:
    case TreeNode::Op::Div: {
      const double a = eval_node(*n.left, x, polarity);
      const double b = eval_node(*n.right, x, polarity);
      if (a == sentinel || b == sentinel) return sentinel;  // absorbing
      double r;
      if (n.op == TreeNode::Op::Add) r = a + b;
      else if (n.op == TreeNode::Op::Mul) r = a * b;
      else r = std::fabs(b) < kDivEpsilon ? 1.0 : a / b;  // protected DIVIDE
      return std::isfinite(r) ? r : sentinel;
    }
  }
  return sentinel;
}

}  // namespace

double eval_tree(const FunctionTree& t, const IndicatorVector& x) {
  return eval_node(*t.root, x, t.polarity);
}

Label predict_gp(const FunctionTree& t, const IndicatorVector& x) {
  const bool at_or_above = eval_tree(t, x) >= t.output_threshold;
  if (t.state_side == StateSide::AtOrAbove) {
    return at_or_above ? Label::State : Label::Event;
  }
  return at_or_above ? Label::Event : Label::State;
}

// --------------------------------------------------------------------------
// Evolution
// --------------------------------------------------------------------------

namespace {

std::unique_ptr<TreeNode> make_terminal(int index) {
  auto n = std::make_unique<TreeNode>();
  n->op = TreeNode::Op::Terminal;
  n->terminal = index;
  return n;
}

TreeNode::Op random_op(SplitMix64& rng) {
  switch (rng.next_below(3)) {
    case 0: return TreeNode::Op::Add;
    case 1: return TreeNode::Op::Mul;
    default: return TreeNode::Op::Div;
  }
}

std::unique_ptr<TreeNode> gen_full(SplitMix64& rng, int depth) {
  if (depth <= 0) return make_terminal(static_cast<int>(rng.next_below(kNumIndicators)));
  auto n = std::make_unique<TreeNode>();
  n->op = random_op(rng);
  n->left = gen_full(rng, depth - 1);
  n->right = gen_full(rng, depth - 1);
  return n;
}

std::unique_ptr<TreeNode> gen_grow(SplitMix64& rng, int depth) {
  // uniform over the 17 primitives, so terminals win 14/17 of the time
  if (depth <= 0 || rng.next_below(17) < kNumIndicators) {
    return make_terminal(static_cast<int>(rng.next_below(kNumIndicators)));
  }
  auto n = std::make_unique<TreeNode>();
  n->op = random_op(rng);
  n->left = gen_grow(rng, depth - 1);
  n->right = gen_grow(rng, depth - 1);
  return n;
}

/// Pre-order access to the unique_ptr that owns the index-th node.
std::unique_ptr<TreeNode>* nth_subtree(std::unique_ptr<TreeNode>& root, int& index) {
  if (index == 0) return &root;
  --index;
  if (root->op == TreeNode::Op::Terminal) return nullptr;
  if (auto* hit = nth_subtree(root->left, index)) return hit;
  return nth_subtree(root->right, index);
}

std::unique_ptr<TreeNode>* pick_node(std::unique_ptr<TreeNode>& root, SplitMix64& rng) {
  int index = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(tree_size(*root))));
  return nth_subtree(root, index);
}

struct WeightedVector {
  IndicatorVector x;
  double w_state = 0.0;
  double w_event = 0.0;
};

struct Individual {
  FunctionTree tree;
  double fitness = -1.0;
  double threshold = 0.0;
  StateSide side = StateSide::AtOrAbove;
};

/// Fitness = best threshold accuracy over the tree's outputs. Duplicate
/// vectors were collapsed up front, which changes nothing in the search but
/// makes a 10k-clause corpus cost ~#distinct-verbs per tree.
void score(Individual& ind, const std::vector<WeightedVector>& data) {
  std::vector<ScalarPoint> points;
  points.reserve(data.size());
  for (const auto& d : data) {
    points.push_back({eval_tree(ind.tree, d.x), d.w_state, d.w_event});
  }
  const ScalarThresholdFit fit = fit_scalar_threshold(std::move(points));
  ind.fitness = fit.accuracy;
  ind.threshold = fit.threshold;
  ind.side = fit.side;
}

std::size_t tournament(const std::vector<Individual>& pop, int k, SplitMix64& rng) {
  std::size_t best = static_cast<std::size_t>(rng.next_below(pop.size()));
  for (int i = 1; i < k; ++i) {
    const auto cand = static_cast<std::size_t>(rng.next_below(pop.size()));
    if (pop[cand].fitness > pop[best].fitness ||
        (pop[cand].fitness == pop[best].fitness && cand < best)) {
      best = cand;
    }
  }
  return best;
}

}  // namespace

GPFit gp_evolve(const std::vector<LabeledExample>& train, const GPConfig& cfg,
                const std::array<int, kNumIndicators>& polarity) {
  if (train.empty()) throw EmptyTrainingSetError();
  bool has_state = false, has_event = false;
  for (const auto& ex : train) {
    (ex.y == Label::State ? has_state : has_event) = true;
  }
  if (!has_state || !has_event) throw SingleClassTrainingError();
  if (cfg.population_size < 2) throw DomainError("population_size must be >= 2");
  if (cfg.crossover_prob + cfg.mutation_prob > 1.0 + 1e-12) {
    throw DomainError("crossover_prob + mutation_prob must be <= 1");
  }

  // collapse duplicate vectors, keyed by value for a deterministic order
  std::map<std::array<double, kNumIndicators>, std::pair<double, double>> grouped;
  for (const auto& ex : train) {
    auto& w = grouped[ex.x.values];
    (ex.y == Label::State ? w.first : w.second) += 1.0;
  }
  std::vector<WeightedVector> data;
  data.reserve(grouped.size());
  for (const auto& [values, w] : grouped) {
    WeightedVector wv;
    wv.x.values = values;
    wv.w_state = w.first;
    wv.w_event = w.second;
    data.push_back(wv);
  }

  SplitMix64 rng(cfg.seed);
  const std::size_t pop_size = cfg.population_size;

  // ramped half-and-half; the first 14 individuals are the bare terminals so
  // evolution starts no worse than the best single indicator
  std::vector<Individual> pop(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    pop[i].tree.polarity = polarity;
    if (i < kNumIndicators) {
      pop[i].tree.root = make_terminal(static_cast<int>(i));
      continue;
    }
    const int span = cfg.init_depth_max - cfg.init_depth_min + 1;
    const int depth = cfg.init_depth_min + static_cast<int>((i - kNumIndicators) % span);
    const bool full = ((i - kNumIndicators) / span) % 2 == 0;
    pop[i].tree.root = full ? gen_full(rng, depth) : gen_grow(rng, depth);
  }

  GPFit result;
  auto evaluate_range = [&](std::vector<Individual>& v, std::size_t begin) {
    parallel_for(v.size() - begin, [&](std::size_t i) { score(v[begin + i], data); });
    result.evaluations += v.size() - begin;
  };
  evaluate_range(pop, 0);

  std::size_t best_index = 0;
  for (std::size_t i = 1; i < pop_size; ++i) {
    if (pop[i].fitness > pop[best_index].fitness) best_index = i;
  }
  Individual best_ever = pop[best_index];
  result.best_by_generation.push_back(best_ever.fitness);

  auto breed_one = [&](const std::vector<Individual>& parents) -> Individual {
    const double r = rng.next_unit();
    if (r < cfg.crossover_prob) {
      const Individual& pa = parents[tournament(parents, cfg.tournament_size, rng)];
      const Individual& pb = parents[tournament(parents, cfg.tournament_size, rng)];
      Individual child;
      child.tree = pa.tree;
      FunctionTree donor = pb.tree;
      auto* site = pick_node(child.tree.root, rng);
      auto* graft = pick_node(donor.root, rng);
      *site = clone_tree(**graft);
      if (tree_depth(*child.tree.root) > cfg.max_depth) {
        child.tree = pa.tree;  // oversized offspring: keep the parent
      }
      return child;
    }
    if (r < cfg.crossover_prob + cfg.mutation_prob) {
      const Individual& pa = parents[tournament(parents, cfg.tournament_size, rng)];
      Individual child;
      child.tree = pa.tree;
      auto* site = pick_node(child.tree.root, rng);
      const int depth = static_cast<int>(
          rng.next_below(static_cast<std::uint64_t>(cfg.mutation_grow_depth) + 1));
      *site = gen_grow(rng, depth);
      if (tree_depth(*child.tree.root) > cfg.max_depth) {
        child.tree = pa.tree;
      }
      return child;
    }
    Individual copy;
    copy.tree = parents[tournament(parents, cfg.tournament_size, rng)].tree;
    return copy;
  };

  while (result.evaluations < cfg.evaluation_budget) {
    const std::uint64_t remaining = cfg.evaluation_budget - result.evaluations;
    const std::size_t n_offspring =
        static_cast<std::size_t>(std::min<std::uint64_t>(remaining, pop_size - 1));

    std::vector<Individual> next;
    next.reserve(n_offspring + 1);
    next.push_back(best_ever);  // elite slot, already scored
    for (std::size_t i = 0; i < n_offspring; ++i) next.push_back(breed_one(pop));
    evaluate_range(next, 1);

    pop = std::move(next);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (pop[i].fitness > best_ever.fitness) best_ever = pop[i];
    }
    result.best_by_generation.push_back(best_ever.fitness);
  }

  best_ever.tree.output_threshold = best_ever.threshold;
  best_ever.tree.state_side = best_ever.side;
  result.tree = best_ever.tree;
  result.train_accuracy = best_ever.fitness;
  return result;
}

}  // namespace aspectlab
