#include "aspectlab/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "aspectlab/errors.hpp"

namespace aspectlab {

namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

// JSON has no infinity literal, so open thresholds are strings
json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? json("+inf") : json("-inf");
  return json(v);
}

double parse_number_or_inf(const json& j, const char* field) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw DomainError(std::string("bad value for ") + field + ": " + s);
  }
  return j.get<double>();
}

json side_to_json(StateSide s) {
  return s == StateSide::AtOrAbove ? "at_or_above" : "below";
}

StateSide side_from_json(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "at_or_above") return StateSide::AtOrAbove;
  if (s == "below") return StateSide::Below;
  throw DomainError("bad state_side: " + s);
}

json tree_to_json(const TreeNode& n) {
  if (n.op == TreeNode::Op::Terminal) return std::string(indicator_name(n.terminal));
  json j = json::array();
  switch (n.op) {
    case TreeNode::Op::Add: j.push_back("ADD"); break;
    case TreeNode::Op::Mul: j.push_back("MUL"); break;
    case TreeNode::Op::Div: j.push_back("DIV"); break;
    default: break;
  }
  j.push_back(tree_to_json(*n.left));
  j.push_back(tree_to_json(*n.right));
  return j;
}

std::unique_ptr<TreeNode> tree_from_json(const json& j) {
  auto n = std::make_unique<TreeNode>();
  if (j.is_string()) {
    const int idx = indicator_index_by_name(j.get<std::string>());
    if (idx < 0) throw DomainError("unknown terminal: " + j.get<std::string>());
    n->op = TreeNode::Op::Terminal;
    n->terminal = idx;
    return n;
  }
  if (!j.is_array() || j.size() != 3) throw DomainError("bad function tree node");
  const auto op = j[0].get<std::string>();
  if (op == "ADD") n->op = TreeNode::Op::Add;
  else if (op == "MUL") n->op = TreeNode::Op::Mul;
  else if (op == "DIV") n->op = TreeNode::Op::Div;
  else throw DomainError("unknown tree operator: " + op);
  n->left = tree_from_json(j[1]);
  n->right = tree_from_json(j[2]);
  return n;
}

json dtree_node_to_json(const DecisionTree& t, int index) {
  const auto& n = t.nodes[index];
  json j;
  if (n.is_leaf) {
    j["leaf"] = {{"label", std::string(label_name(n.label))},
                 {"n_state", n.n_state},
                 {"n_event", n.n_event}};
  } else {
    j["split"] = {{"indicator_index", n.indicator_index},
                  {"split_value", n.split_value},
                  {"left", dtree_node_to_json(t, n.left)},
                  {"right", dtree_node_to_json(t, n.right)}};
  }
  return j;
}

int dtree_node_from_json(const json& j, DecisionTree& t) {
  const int index = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("leaf")) {
    const auto& leaf = j.at("leaf");
    auto& n = t.nodes[index];
    const auto label = leaf.at("label").get<std::string>();
    if (label == "state") n.label = Label::State;
    else if (label == "event") n.label = Label::Event;
    else throw DomainError("bad leaf label: " + label);
    n.n_state = leaf.at("n_state").get<std::uint64_t>();
    n.n_event = leaf.at("n_event").get<std::uint64_t>();
  } else if (j.contains("split")) {
    const auto& split = j.at("split");
    const int ind = split.at("indicator_index").get<int>();
    if (ind < 0 || ind >= kNumIndicators) throw DomainError("indicator_index out of range");
    const double value = split.at("split_value").get<double>();
    const int left = dtree_node_from_json(split.at("left"), t);
    const int right = dtree_node_from_json(split.at("right"), t);
    auto& n = t.nodes[index];
    n.is_leaf = false;
    n.indicator_index = ind;
    n.split_value = value;
    n.left = left;
    n.right = right;
  } else {
    throw DomainError("decision tree node needs a leaf or a split");
  }
  return index;
}

template <std::size_t N>
void array_from_json(const json& j, std::array<double, N>& out, const char* field) {
  if (!j.is_array() || j.size() != N) {
    throw DomainError(std::string(field) + " must be an array of " + std::to_string(N));
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<double>();
}

}  // namespace

std::string model_to_json(const Model& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = std::string(model_kind(m));
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, ThresholdModel>) {
          j["indicator_index"] = model.indicator_index;
          j["threshold"] = number_or_inf(model.threshold);
          j["state_side"] = side_to_json(model.state_side);
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          j["weights"] = model.weights;
          j["intercept"] = model.intercept;
          j["feature_means"] = model.feature_means;
          j["feature_sds"] = model.feature_sds;
          j["output_threshold"] = model.output_threshold;
          j["converged_by_cap"] = model.converged_by_cap;
        } else if constexpr (std::is_same_v<T, FunctionTree>) {
          j["tree"] = tree_to_json(*model.root);
          j["polarity"] = model.polarity;
          j["output_threshold"] = number_or_inf(model.output_threshold);
          j["state_side"] = side_to_json(model.state_side);
        } else {
          j["root"] = dtree_node_to_json(model, 0);
        }
      },
      m);
  return j.dump(2) + "\n";
}

Model model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad model JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw DomainError("unsupported model format_version");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "threshold") {
      ThresholdModel m;
      m.indicator_index = j.at("indicator_index").get<int>();
      if (m.indicator_index < 0 || m.indicator_index >= kNumIndicators) {
        throw DomainError("indicator_index out of range");
      }
      m.threshold = parse_number_or_inf(j.at("threshold"), "threshold");
      m.state_side = side_from_json(j.at("state_side"));
      return m;
    }
    if (kind == "loglinear") {
      LinearModel m;
      array_from_json(j.at("weights"), m.weights, "weights");
      m.intercept = j.at("intercept").get<double>();
      array_from_json(j.at("feature_means"), m.feature_means, "feature_means");
      array_from_json(j.at("feature_sds"), m.feature_sds, "feature_sds");
      m.output_threshold = j.at("output_threshold").get<double>();
      if (j.contains("converged_by_cap")) {
        m.converged_by_cap = j.at("converged_by_cap").get<bool>();
      }
      return m;
    }
    if (kind == "gptree") {
      FunctionTree m;
      m.root = tree_from_json(j.at("tree"));
      const auto& pol = j.at("polarity");
      if (!pol.is_array() || pol.size() != kNumIndicators) {
        throw DomainError("polarity must be an array of 14");
      }
      for (int i = 0; i < kNumIndicators; ++i) {
        const int p = pol[i].get<int>();
        if (p != 1 && p != -1) throw DomainError("polarity entries must be +1 or -1");
        m.polarity[i] = p;
      }
      m.output_threshold = parse_number_or_inf(j.at("output_threshold"), "output_threshold");
      m.state_side = side_from_json(j.at("state_side"));
      return m;
    }
    if (kind == "dtree") {
      DecisionTree m;
      dtree_node_from_json(j.at("root"), m);
      return m;
    }
    throw DomainError("unknown model kind: " + kind);
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad model JSON: ") + e.what());
  }
}

void save_model(const Model& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << model_to_json(m);
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError(path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace aspectlab
