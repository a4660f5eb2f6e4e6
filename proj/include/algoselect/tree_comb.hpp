#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "algoselect/comb.hpp"
#include "algoselect/rng.hpp"

namespace algoselect {

// Binary selection tree. Internal nodes gate on a seeding function and have
// exactly two children; leaves carry an algorithm id. A node is exactly one
// of the two variants, so malformed trees are unrepresentable.
class TreeCombNode {
 public:
  static TreeCombNode leaf(std::string algorithm_id);
  static TreeCombNode gate(SeedingFunction seeding, TreeCombNode left, TreeCombNode right);

  TreeCombNode(const TreeCombNode& other);
  TreeCombNode& operator=(const TreeCombNode& other);
  TreeCombNode(TreeCombNode&&) noexcept = default;
  TreeCombNode& operator=(TreeCombNode&&) noexcept = default;

  bool is_leaf() const { return std::holds_alternative<std::string>(node_); }
  const std::string& algorithm() const;    // leaf nodes only
  const SeedingFunction& seeding() const;  // gate nodes only
  const TreeCombNode& left() const;
  const TreeCombNode& right() const;

 private:
  struct Gate {
    SeedingFunction seeding;
    std::unique_ptr<TreeCombNode> left;
    std::unique_ptr<TreeCombNode> right;
  };
  explicit TreeCombNode(std::variant<Gate, std::string> node) : node_(std::move(node)) {}
  std::variant<Gate, std::string> node_;
};

// One routing decision. node_id is the binary path string from the root
// ("" for the root, then "L"/"R" per step); t is the gate value in (0,1).
struct TraceStep {
  std::string node_id;
  double t = 0.0;
  bool went_right = false;
};

struct ExecutionTrace {
  std::vector<TraceStep> steps;
  std::string terminal;
};

// Probabilistic routing: at each gate go left with probability (1 - t),
// right with probability t. route and trace consume the rng identically.
std::string route(const TreeCombNode& tree, std::span<const double> phi, Rng& rng);
ExecutionTrace trace(const TreeCombNode& tree, std::span<const double> phi, Rng& rng);

// Deterministic mode: go right iff t > 0.5 (ties route left). No rng.
std::string route_deterministic(const TreeCombNode& tree, std::span<const double> phi);
ExecutionTrace trace_deterministic(const TreeCombNode& tree, std::span<const double> phi);

std::size_t leaf_count(const TreeCombNode& tree);

// A complete tree of the given depth; every gate shares one seeding function
// and leaves are named by their index ("leaf0", "leaf1", ...).
TreeCombNode complete_tree(std::size_t depth, const SeedingFunction& seeding);

// JSON wire form: {"gate": {...}, "left": ..., "right": ...} for internal
// nodes and {"leaf": "<algorithm-id>"} for leaves.
std::string tree_to_json(const TreeCombNode& tree);
TreeCombNode tree_from_json(const std::string& text);

}  // namespace algoselect
