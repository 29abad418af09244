#include <limits>

#include <doctest.h>

#include "aspectlab/errors.hpp"
#include "aspectlab/learners.hpp"
#include "aspectlab/model_io.hpp"
#include "aspectlab/rng.hpp"
#include "test_helpers.hpp"

using namespace aspectlab;
using namespace aspectlab::testing;

namespace {

std::vector<LabeledExample> small_train(SplitMix64& rng, std::size_t n = 60) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    LabeledExample ex;
    ex.verb_lemma = "v" + std::to_string(i % 9);
    ex.x = random_vector(rng);
    ex.y = ex.x.values[2] + 0.3 * ex.x.values[6] > 70.0 ? Label::State : Label::Event;
    out.push_back(std::move(ex));
  }
  out[0].y = Label::State;
  out[1].y = Label::Event;
  return out;
}

void check_round_trip(const Model& m, SplitMix64& rng, int n_vectors = 2000) {
  const std::string text = model_to_json(m);
  const Model reloaded = model_from_json(text);
  CHECK(model_kind(reloaded) == model_kind(m));
  for (int i = 0; i < n_vectors; ++i) {
    const IndicatorVector x = random_vector(rng);
    CHECK(predict(m, x) == predict(reloaded, x));
  }
  // serialization is a fixed point
  CHECK(model_to_json(reloaded) == text);
}

}  // namespace

TEST_SUITE("model_io") {
  TEST_CASE("threshold model round trip, including open thresholds") {
    SplitMix64 rng(123);
    check_round_trip(ThresholdModel{3, 1.02310234, StateSide::AtOrAbove}, rng);
    check_round_trip(
        ThresholdModel{0, -std::numeric_limits<double>::infinity(), StateSide::Below}, rng);
    check_round_trip(
        ThresholdModel{13, std::numeric_limits<double>::infinity(), StateSide::AtOrAbove},
        rng);
  }

  TEST_CASE("fitted models round trip bit-exactly") {
    SplitMix64 rng(321);
    const auto train = small_train(rng);

    SUBCASE("loglinear") {
      check_round_trip(fit_loglinear(train).model, rng);
    }
    SUBCASE("decision tree") {
      TreeGrowConfig cfg;
      cfg.min_node_size = 2;
      cfg.min_deviance_fraction = 0.0;
      check_round_trip(fit_decision_tree(train, cfg), rng);
    }
    SUBCASE("gp tree") {
      GPConfig cfg;
      cfg.population_size = 30;
      cfg.evaluation_budget = 600;
      cfg.seed = 9;
      std::array<int, kNumIndicators> polarity;
      polarity.fill(1);
      polarity[2] = -1;
      check_round_trip(gp_evolve(train, cfg, polarity).tree, rng);
    }
  }

  TEST_CASE("save and load through files") {
    TempDir tmp;
    SplitMix64 rng(11);
    const Model m = ThresholdModel{5, 12.75, StateSide::Below};
    save_model(m, tmp.path("m.json"));
    const Model loaded = load_model(tmp.path("m.json"));
    CHECK(model_to_json(loaded) == model_to_json(m));
    CHECK_THROWS_AS(load_model(tmp.path("missing.json")), FileNotFoundError);
  }

  TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(model_from_json("not json"), DomainError);
    CHECK_THROWS_AS(model_from_json(R"({"format_version":1,"kind":"nope"})"), DomainError);
    CHECK_THROWS_AS(model_from_json(R"({"format_version":2,"kind":"threshold"})"),
                    DomainError);
    CHECK_THROWS_AS(
        model_from_json(
            R"({"format_version":1,"kind":"threshold","indicator_index":99,)"
            R"("threshold":1.0,"state_side":"below"})"),
        DomainError);
  }

  TEST_CASE("function tree serialization uses nested prefix arrays") {
    FunctionTree t;
    auto mk = [](TreeNode::Op o, std::unique_ptr<TreeNode> l, std::unique_ptr<TreeNode> r) {
      auto n = std::make_unique<TreeNode>();
      n->op = o;
      n->left = std::move(l);
      n->right = std::move(r);
      return n;
    };
    auto leaf = [](int i) {
      auto n = std::make_unique<TreeNode>();
      n->op = TreeNode::Op::Terminal;
      n->terminal = i;
      return n;
    };
    t.root = mk(TreeNode::Op::Div, mk(TreeNode::Op::Add, leaf(0), leaf(1)), leaf(2));
    const std::string text = model_to_json(t);
    CHECK(text.find("\"DIV\"") != std::string::npos);
    CHECK(text.find("\"ADD\"") != std::string::npos);
    CHECK(text.find("\"frequency\"") != std::string::npos);
    CHECK(text.find("\"not_never\"") != std::string::npos);
    CHECK(text.find("\"temporal_adverb\"") != std::string::npos);
  }
}
