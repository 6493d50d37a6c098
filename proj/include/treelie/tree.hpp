#pragma once

// Weighted rooted trees with nodes 1..n and parent(i) < i.

#include <map>
#include <string>
#include <vector>

namespace treelie {

struct Edge {
  int parent = 0;
  int child = 0;
  int weight = 1;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class TreeDiagram {
 public:
  /// Validates and builds; throws ValidationError naming the offending node.
  static TreeDiagram build(int n, const std::vector<Edge>& edges);

  int size() const { return n_; }
  /// 0 for the root.
  int parent(int i) const;
  /// Weight of the edge into i; 1 for the root by convention.
  int weight(int i) const;
  const std::vector<int>& children(int i) const;
  bool is_tip(int i) const { return children(i).empty(); }
  /// Edges in child order.
  std::vector<Edge> edges() const;

  friend bool operator==(const TreeDiagram& a, const TreeDiagram& b) {
    return a.n_ == b.n_ && a.parent_ == b.parent_ && a.weight_ == b.weight_;
  }

 private:
  void check_node(int i) const;

  int n_ = 1;
  std::vector<int> parent_;  // indexed by node, slot 0 unused
  std::vector<int> weight_;
  std::vector<std::vector<int>> children_;
};

/// Root-to-i path, starting at 1 and ending at i.
std::vector<int> clan(const TreeDiagram& tree, int i);

/// Strict descendants of i, ascending.
std::vector<int> descendants(const TreeDiagram& tree, int i);

/// True when neither node lies on the other's clan.
bool independent(const TreeDiagram& tree, int i, int j);

struct NodeClassification {
  std::vector<int> tips;
  std::vector<int> upsilon;  // every strict descendant has incoming weight 1
  std::vector<int> phi;      // root plus nodes reached from it through weight-1 edges only
  std::vector<int> omega;    // children of the root
  std::map<int, std::vector<int>> descendants;
  std::map<int, std::vector<int>> children;
  std::map<int, std::vector<int>> clans;
};

NodeClassification classify_nodes(const TreeDiagram& tree);

struct NodeWeights {
  long long N = 1;      // 1 + sum of products of clan weight prefixes
  long long kappa = 1;  // product of all edge weights below the node
  std::map<int, long long> kappa_map;  // descendant s -> kappa / (weights on path to s)
};

NodeWeights weights(const TreeDiagram& tree, int i);

/// Product of the edge weights on the path from ancestor a down to s.
long long path_product(const TreeDiagram& tree, int a, int s);

std::string tree_to_json(const TreeDiagram& tree);
TreeDiagram tree_from_json(const std::string& text);
TreeDiagram load_tree_file(const std::string& path);

}  // namespace treelie
