#include "treelie/tree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treelie/errors.hpp"

namespace treelie {

namespace {

[[noreturn]] void reject(const std::string& what, int node) {
  throw ValidationError(what + " (node " + std::to_string(node) + ")");
}

}  // namespace

TreeDiagram TreeDiagram::build(int n, const std::vector<Edge>& edges) {
  if (n < 1) reject("node count must be positive", n);
  TreeDiagram t;
  t.n_ = n;
  t.parent_.assign(n + 1, -1);
  t.weight_.assign(n + 1, 1);
  t.children_.assign(n + 1, {});
  t.parent_[1] = 0;
  for (const auto& e : edges) {
    if (e.child < 2 || e.child > n) reject("child out of range", e.child);
    if (e.parent < 1 || e.parent > n) reject("parent out of range", e.parent);
    if (e.parent >= e.child) reject("parent must be smaller than child", e.child);
    if (e.weight < 1) reject("weight must be at least 1", e.child);
    if (t.parent_[e.child] != -1) reject("duplicate child", e.child);
    t.parent_[e.child] = e.parent;
    t.weight_[e.child] = e.weight;
  }
  for (int i = 2; i <= n; ++i)
    if (t.parent_[i] == -1) reject("missing node", i);
  for (int i = 2; i <= n; ++i) t.children_[t.parent_[i]].push_back(i);
  return t;
}

void TreeDiagram::check_node(int i) const {
  if (i < 1 || i > n_) reject("node out of range", i);
}

int TreeDiagram::parent(int i) const {
  check_node(i);
  return parent_[i];
}

int TreeDiagram::weight(int i) const {
  check_node(i);
  return weight_[i];
}

const std::vector<int>& TreeDiagram::children(int i) const {
  check_node(i);
  return children_[i];
}

std::vector<Edge> TreeDiagram::edges() const {
  std::vector<Edge> out;
  for (int i = 2; i <= n_; ++i) out.push_back({parent_[i], i, weight_[i]});
  return out;
}

std::vector<int> clan(const TreeDiagram& tree, int i) {
  std::vector<int> path;
  for (int v = i; v != 0; v = tree.parent(v)) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> descendants(const TreeDiagram& tree, int i) {
  std::vector<int> out;
  std::vector<int> stack(tree.children(i).begin(), tree.children(i).end());
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (int c : tree.children(v)) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool independent(const TreeDiagram& tree, int i, int j) {
  if (i == j) return false;
  int lo = std::min(i, j), hi = std::max(i, j);
  for (int v = hi; v != 0; v = tree.parent(v))
    if (v == lo) return false;
  return true;
}

NodeClassification classify_nodes(const TreeDiagram& tree) {
  NodeClassification nc;
  const int n = tree.size();
  for (int i = 1; i <= n; ++i) {
    nc.children[i] = tree.children(i);
    nc.descendants[i] = descendants(tree, i);
    nc.clans[i] = clan(tree, i);
    if (tree.is_tip(i)) nc.tips.push_back(i);
    bool free = std::all_of(nc.descendants[i].begin(), nc.descendants[i].end(),
                            [&](int s) { return tree.weight(s) == 1; });
    if (free) nc.upsilon.push_back(i);
    bool unit_path = std::all_of(nc.clans[i].begin() + 1, nc.clans[i].end(),
                                 [&](int s) { return tree.weight(s) == 1; });
    if (unit_path) nc.phi.push_back(i);
  }
  nc.omega = tree.children(1);
  return nc;
}

long long path_product(const TreeDiagram& tree, int a, int s) {
  long long p = 1;
  int v = s;
  for (; v != a && v != 0; v = tree.parent(v)) p *= tree.weight(v);
  if (v != a) reject("node is not a descendant", s);
  return p;
}

NodeWeights weights(const TreeDiagram& tree, int i) {
  NodeWeights w;
  auto path = clan(tree, i);
  long long prefix = 1;
  for (std::size_t s = 1; s < path.size(); ++s) {
    prefix *= tree.weight(path[s]);
    w.N += prefix;
  }
  auto desc = descendants(tree, i);
  for (int s : desc) w.kappa *= tree.weight(s);
  for (int s : desc) w.kappa_map[s] = w.kappa / path_product(tree, i, s);
  return w;
}

std::string tree_to_json(const TreeDiagram& tree) {
  nlohmann::ordered_json j;
  j["n"] = tree.size();
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : tree.edges())
    j["edges"].push_back({{"parent", e.parent}, {"child", e.child}, {"weight", e.weight}});
  return j.dump();
}

TreeDiagram tree_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("tree file is not valid JSON: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges"))
      edges.push_back({e.at("parent").get<int>(), e.at("child").get<int>(), e.at("weight").get<int>()});
    return TreeDiagram::build(n, edges);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed tree file: ") + e.what());
  }
}

TreeDiagram load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open tree file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return tree_from_json(ss.str());
}

}  // namespace treelie
