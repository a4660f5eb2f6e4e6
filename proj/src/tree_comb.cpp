#include "algoselect/tree_comb.hpp"

#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace algoselect {

TreeCombNode TreeCombNode::leaf(std::string algorithm_id) {
  return TreeCombNode(std::variant<Gate, std::string>(std::move(algorithm_id)));
}

TreeCombNode TreeCombNode::gate(SeedingFunction seeding, TreeCombNode left, TreeCombNode right) {
  Gate g{std::move(seeding), std::make_unique<TreeCombNode>(std::move(left)),
         std::make_unique<TreeCombNode>(std::move(right))};
  return TreeCombNode(std::variant<Gate, std::string>(std::move(g)));
}

TreeCombNode::TreeCombNode(const TreeCombNode& other) : node_(std::string{}) {
  *this = other;
}

TreeCombNode& TreeCombNode::operator=(const TreeCombNode& other) {
  if (this == &other) return *this;
  if (other.is_leaf()) {
    node_ = other.algorithm();
  } else {
    Gate g{other.seeding(), std::make_unique<TreeCombNode>(other.left()),
           std::make_unique<TreeCombNode>(other.right())};
    node_ = std::move(g);
  }
  return *this;
}

const std::string& TreeCombNode::algorithm() const {
  return std::get<std::string>(node_);
}

const SeedingFunction& TreeCombNode::seeding() const {
  return std::get<Gate>(node_).seeding;
}

const TreeCombNode& TreeCombNode::left() const { return *std::get<Gate>(node_).left; }
const TreeCombNode& TreeCombNode::right() const { return *std::get<Gate>(node_).right; }

namespace {

// Shared walker so route/trace (and both policies) agree on t evaluation and
// rng consumption order: exactly one decision per gate, root to leaf.
template <typename Decide, typename OnStep>
const TreeCombNode* walk(const TreeCombNode& tree, std::span<const double> phi,
                         Decide&& decide, OnStep&& on_step) {
  const TreeCombNode* node = &tree;
  std::string path;
  while (!node->is_leaf()) {
    const double t = seed(node->seeding(), phi);
    const bool right = decide(t);
    on_step(path, t, right);
    path.push_back(right ? 'R' : 'L');
    node = right ? &node->right() : &node->left();
  }
  return node;
}

}  // namespace

std::string route(const TreeCombNode& tree, std::span<const double> phi, Rng& rng) {
  const auto* leaf = walk(
      tree, phi, [&rng](double t) { return !(rng.uniform01() < (1.0 - t)); },
      [](const std::string&, double, bool) {});
  return leaf->algorithm();
}

ExecutionTrace trace(const TreeCombNode& tree, std::span<const double> phi, Rng& rng) {
  ExecutionTrace out;
  const auto* leaf = walk(
      tree, phi, [&rng](double t) { return !(rng.uniform01() < (1.0 - t)); },
      [&out](const std::string& id, double t, bool right) {
        out.steps.push_back({id, t, right});
      });
  out.terminal = leaf->algorithm();
  return out;
}

std::string route_deterministic(const TreeCombNode& tree, std::span<const double> phi) {
  const auto* leaf = walk(
      tree, phi, [](double t) { return t > 0.5; }, [](const std::string&, double, bool) {});
  return leaf->algorithm();
}

ExecutionTrace trace_deterministic(const TreeCombNode& tree, std::span<const double> phi) {
  ExecutionTrace out;
  const auto* leaf = walk(
      tree, phi, [](double t) { return t > 0.5; },
      [&out](const std::string& id, double t, bool right) {
        out.steps.push_back({id, t, right});
      });
  out.terminal = leaf->algorithm();
  return out;
}

std::size_t leaf_count(const TreeCombNode& tree) {
  if (tree.is_leaf()) return 1;
  return leaf_count(tree.left()) + leaf_count(tree.right());
}

namespace {

TreeCombNode complete_subtree(std::size_t depth, const SeedingFunction& seeding,
                              std::size_t& next_leaf) {
  if (depth == 0) return TreeCombNode::leaf("leaf" + std::to_string(next_leaf++));
  auto left = complete_subtree(depth - 1, seeding, next_leaf);
  auto right = complete_subtree(depth - 1, seeding, next_leaf);
  return TreeCombNode::gate(seeding, std::move(left), std::move(right));
}

nlohmann::json node_to_json(const TreeCombNode& node) {
  if (node.is_leaf()) return nlohmann::json{{"leaf", node.algorithm()}};
  return nlohmann::json{
      {"gate", {{"weights", node.seeding().weights}, {"bias", node.seeding().bias}}},
      {"left", node_to_json(node.left())},
      {"right", node_to_json(node.right())}};
}

TreeCombNode node_from_json(const nlohmann::json& j) {
  if (j.contains("leaf")) return TreeCombNode::leaf(j.at("leaf").get<std::string>());
  if (!j.contains("gate") || !j.contains("left") || !j.contains("right")) {
    throw std::invalid_argument("tree node needs either a leaf or gate/left/right");
  }
  SeedingFunction s;
  s.weights = j.at("gate").at("weights").get<std::vector<double>>();
  s.bias = j.at("gate").at("bias").get<double>();
  return TreeCombNode::gate(std::move(s), node_from_json(j.at("left")),
                            node_from_json(j.at("right")));
}

}  // namespace

TreeCombNode complete_tree(std::size_t depth, const SeedingFunction& seeding) {
  std::size_t next_leaf = 0;
  return complete_subtree(depth, seeding, next_leaf);
}

std::string tree_to_json(const TreeCombNode& tree) { return node_to_json(tree).dump(); }

TreeCombNode tree_from_json(const std::string& text) {
  return node_from_json(nlohmann::json::parse(text));
}

}  // namespace algoselect
