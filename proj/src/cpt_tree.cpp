#include "bnstrat/model.hpp"

#include <algorithm>

namespace bnstrat {

CptTree CptTree::build(const Cpt& cpt, std::span<const VarId> parents) {
  CptTree tree;
  tree.arity_ = cpt.arity();
  tree.leaves_.assign(cpt.entries().begin(), cpt.entries().end());
  tree.nodes_.emplace_back();

  // Level by level: the children of every node at depth d sit in one block,
  // so leaves come out in row order and leaf r points at row r.
  std::vector<std::uint32_t> level{0};
  const auto arities = cpt.parent_arities();
  for (std::size_t d = 0; d < parents.size(); ++d) {
    std::vector<std::uint32_t> next;
    next.reserve(level.size() * arities[d]);
    for (std::uint32_t at : level) {
      const auto first = static_cast<std::uint32_t>(tree.nodes_.size());
      tree.nodes_[at].var = static_cast<std::int64_t>(parents[d]);
      tree.nodes_[at].first = first;
      tree.nodes_[at].fanout = static_cast<std::uint32_t>(arities[d]);
      for (std::size_t k = 0; k < arities[d]; ++k) {
        tree.nodes_.emplace_back();
        next.push_back(first + static_cast<std::uint32_t>(k));
      }
    }
    level = std::move(next);
  }
  for (std::size_t r = 0; r < level.size(); ++r) {
    tree.nodes_[level[r]].first = static_cast<std::uint32_t>(r * cpt.arity());
  }
  return tree;
}

void CptTree::copy_pruned(const CptTree& src, std::uint32_t from, std::uint32_t to, VarId var,
                          Value value) {
  const Node node = src.nodes_[from];
  if (node.var == static_cast<std::int64_t>(var)) {
    copy_pruned(src, node.first + static_cast<std::uint32_t>(value), to, var, value);
    return;
  }
  if (node.var < 0) {
    nodes_[to] = Node{-1, static_cast<std::uint32_t>(leaves_.size()), 0};
    auto row = std::span<const double>(src.leaves_).subspan(node.first, src.arity_);
    leaves_.insert(leaves_.end(), row.begin(), row.end());
    return;
  }
  const auto first = static_cast<std::uint32_t>(nodes_.size());
  nodes_.resize(nodes_.size() + node.fanout);
  nodes_[to] = Node{node.var, first, node.fanout};
  for (std::uint32_t k = 0; k < node.fanout; ++k) copy_pruned(src, node.first + k, first + k, var, value);
}

CptTree CptTree::pruned(VarId var, Value value) const {
  CptTree out;
  out.arity_ = arity_;
  out.nodes_.emplace_back();
  out.copy_pruned(*this, 0, 0, var, value);
  return out;
}

std::size_t CptTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const Node& n) { return n.var < 0; }));
}

std::size_t CptTree::depth_from(std::uint32_t at) const {
  const Node& node = nodes_[at];
  if (node.var < 0) return 0;
  std::size_t deepest = 0;
  for (std::uint32_t k = 0; k < node.fanout; ++k) deepest = std::max(deepest, depth_from(node.first + k));
  return deepest + 1;
}

std::size_t CptTree::depth() const { return nodes_.empty() ? 0 : depth_from(0); }

std::vector<VarId> CptTree::tested_variables() const {
  std::vector<VarId> out;
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.var < 0) continue;
    const auto var = static_cast<VarId>(node.var);
    if (std::find(out.begin(), out.end(), var) == out.end()) out.push_back(var);
    for (std::uint32_t k = node.fanout; k-- > 0;) stack.push_back(node.first + k);
  }
  return out;
}

}  // namespace bnstrat
