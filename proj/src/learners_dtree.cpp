#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "aspectlab/errors.hpp"
#include "aspectlab/learners.hpp"

namespace aspectlab {

namespace {

/// Binomial node deviance -2 [nS ln(nS/n) + nE ln(nE/n)], with 0 ln 0 = 0.
double node_deviance(std::uint64_t n_state, std::uint64_t n_event) {
  const double n = static_cast<double>(n_state + n_event);
  double d = 0.0;
  if (n_state > 0) {
    d += static_cast<double>(n_state) * std::log(static_cast<double>(n_state) / n);
  }
  if (n_event > 0) {
    d += static_cast<double>(n_event) * std::log(static_cast<double>(n_event) / n);
  }
  return -2.0 * d;
}

struct SplitChoice {
  bool found = false;
  int indicator = 0;
  double value = 0.0;
  double gain = 0.0;
  std::vector<std::size_t> left, right;
};

SplitChoice best_split(const std::vector<LabeledExample>& train,
                       const std::vector<std::size_t>& members,
                       std::uint64_t min_node_size) {
  const std::size_t n = members.size();
  std::uint64_t n_state = 0;
  for (const auto i : members) n_state += train[i].y == Label::State;
  const double parent_dev = node_deviance(n_state, n - n_state);

  SplitChoice best;
  std::vector<std::size_t> sorted(members);
  for (int ind = 0; ind < kNumIndicators; ++ind) {
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
      const double va = train[a].x.values[ind];
      const double vb = train[b].x.values[ind];
      if (va != vb) return va < vb;
      return a < b;  // stable across platforms
    });
    std::uint64_t left_state = 0;
    for (std::size_t k = 1; k < n; ++k) {
      left_state += train[sorted[k - 1]].y == Label::State;
      const double prev = train[sorted[k - 1]].x.values[ind];
      const double cur = train[sorted[k]].x.values[ind];
      if (prev == cur) continue;  // not a boundary between distinct values
      if (k < min_node_size || n - k < min_node_size) continue;
      const double gain = parent_dev - node_deviance(left_state, k - left_state) -
                          node_deviance(n_state - left_state, (n - k) - (n_state - left_state));
      if (gain <= 0.0) continue;
      // ties keep the first candidate: lowest indicator, then smallest value
      if (!best.found || gain > best.gain) {
        best.found = true;
        best.indicator = ind;
        best.value = (prev + cur) / 2.0;
        best.gain = gain;
        best.left.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
        best.right.assign(sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
      }
    }
  }
  return best;
}

}  // namespace

DecisionTree fit_decision_tree(const std::vector<LabeledExample>& train,
                               const TreeGrowConfig& cfg) {
  if (train.empty()) throw EmptyTrainingSetError();

  DecisionTree tree;
  std::uint64_t root_state = 0;
  for (const auto& ex : train) root_state += ex.y == Label::State;
  const double root_dev = node_deviance(root_state, train.size() - root_state);
  const double min_gain = cfg.min_deviance_fraction * root_dev;

  // grows the subtree for `members` and returns its node index
  auto grow = [&](auto&& self, std::vector<std::size_t> members, int depth) -> int {
    std::uint64_t n_state = 0;
    for (const auto i : members) n_state += train[i].y == Label::State;
    const std::uint64_t n_event = members.size() - n_state;

    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
      auto& node = tree.nodes[index];
      node.n_state = n_state;
      node.n_event = n_event;
      node.label = n_state > n_event ? Label::State : Label::Event;  // ties -> Event
    }

    const bool pure = n_state == 0 || n_event == 0;
    if (pure || depth >= cfg.max_depth) return index;

    SplitChoice split = best_split(train, members, cfg.min_node_size);
    if (!split.found || split.gain < min_gain) return index;

    members.clear();
    members.shrink_to_fit();
    const int left = self(self, std::move(split.left), depth + 1);
    const int right = self(self, std::move(split.right), depth + 1);
    auto& node = tree.nodes[index];
    node.is_leaf = false;
    node.indicator_index = split.indicator;
    node.split_value = split.value;
    node.left = left;
    node.right = right;
    return index;
  };

  std::vector<std::size_t> all(train.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  grow(grow, std::move(all), 0);
  return tree;
}

Label predict_decision_tree(const DecisionTree& t, const IndicatorVector& x) {
  int index = 0;
  while (!t.nodes[index].is_leaf) {
    const auto& node = t.nodes[index];
    index = x.values[node.indicator_index] < node.split_value ? node.left : node.right;
  }
  return t.nodes[index].label;
}

}  // namespace aspectlab
