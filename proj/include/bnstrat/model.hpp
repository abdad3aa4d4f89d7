#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnstrat {

using VarId = std::size_t;
using Value = int;

/// Value per variable, indexed by variable id.
using Instantiation = std::vector<Value>;

/// Permutation of variable ids.
using Ordering = std::vector<VarId>;

struct Variable {
  VarId id = 0;
  std::string name;
  std::size_t arity = 2;
};

/// Dense conditional probability table.
///
/// Rows are laid out lexicographically over the parent values, first
/// declared parent most significant: for parents (p1, p2) with arities
/// (k1, k2), configuration (v1, v2) is row v1 * k2 + v2.
class Cpt {
 public:
  Cpt() = default;
  Cpt(std::size_t arity, std::vector<std::size_t> parent_arities, std::vector<double> entries);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t rows() const noexcept { return arity_ ? entries_.size() / arity_ : 0; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * arity_, arity_);
  }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const std::size_t> parent_arities() const noexcept { return parent_arities_; }

  /// Row index of the configuration `inst` assigns to `parents`.
  std::size_t row_index(std::span<const VarId> parents, std::span<const Value> inst) const;

 private:
  std::size_t arity_ = 0;
  std::vector<std::size_t> parent_arities_;
  std::vector<double> entries_;
};

/// Search-tree form of a Cpt. Each internal node tests one parent and has one
/// branch per parent value; each leaf holds a probability row. Lookup walks
/// the tree with no index arithmetic, and observing a parent prunes the tree
/// down to the branches consistent with the observation.
class CptTree {
 public:
  CptTree() = default;

  /// Tree that tests `parents` in declared order, one leaf per Cpt row.
  static CptTree build(const Cpt& cpt, std::span<const VarId> parents);

  std::span<const double> lookup(std::span<const Value> inst) const {
    std::uint32_t at = 0;
    while (nodes_[at].var >= 0) {
      at = nodes_[at].first + static_cast<std::uint32_t>(inst[static_cast<std::size_t>(nodes_[at].var)]);
    }
    return std::span<const double>(leaves_).subspan(nodes_[at].first, arity_);
  }

  /// Copy in which every test on `var` is replaced by its `value` branch.
  CptTree pruned(VarId var, Value value) const;

  std::size_t arity() const noexcept { return arity_; }
  std::size_t leaf_count() const;
  std::size_t depth() const;
  /// Variables tested anywhere in the tree, in first-visit (preorder) order.
  std::vector<VarId> tested_variables() const;

 private:
  struct Node {
    std::int64_t var = -1;    // tested variable, -1 for a leaf
    std::uint32_t first = 0;  // first child node, or leaf row offset
    std::uint32_t fanout = 0;
  };

  void copy_pruned(const CptTree& src, std::uint32_t from, std::uint32_t to, VarId var, Value value);
  std::size_t depth_from(std::uint32_t at) const;

  std::vector<Node> nodes_;
  std::vector<double> leaves_;
  std::size_t arity_ = 0;
};

enum class CptLookup { Tree, Dense };

class Network;

/// Observed variable values.
class Evidence {
 public:
  Evidence() = default;

  void set(VarId var, Value value) { values_[var] = value; }
  bool observed(VarId var) const { return values_.count(var) != 0; }
  std::optional<Value> value(VarId var) const;
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  /// Per-variable observed value, -1 where unobserved.
  std::vector<Value> dense(std::size_t n) const;

  /// Throws Error when a variable id or value is out of range for `net`.
  void validate(const Network& net) const;

  bool operator==(const Evidence&) const = default;

 private:
  std::map<VarId, Value> values_;
};

/// Discrete belief network: a DAG of variables, each with a conditional
/// probability table stored both densely and as a search tree. Immutable
/// after construction.
class Network {
 public:
  Network() = default;

  /// Validates the structure (acyclic, declared parents, no duplicates) and
  /// every table (shape, entries in [0,1], rows summing to 1 within 1e-6).
  /// Throws Error on violation.
  Network(std::string name, std::vector<Variable> variables,
          std::vector<std::vector<VarId>> parents, std::vector<Cpt> cpts);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return variables_.size(); }
  const Variable& variable(VarId v) const { return variables_[v]; }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  std::size_t arity(VarId v) const { return variables_[v].arity; }
  std::span<const VarId> parents(VarId v) const { return parents_[v]; }
  std::span<const VarId> children(VarId v) const { return children_[v]; }
  const Cpt& cpt(VarId v) const { return cpts_[v]; }
  const CptTree& tree(VarId v) const { return trees_[v]; }
  std::optional<VarId> find(std::string_view name) const;
  std::size_t arc_count() const;

  CptLookup lookup_mode() const noexcept { return lookup_; }
  /// Same network, rows served by the given representation.
  Network with_lookup(CptLookup mode) const;

  /// Distribution of `v` given the parent values in `inst`.
  std::span<const double> row(VarId v, std::span<const Value> inst) const {
    return lookup_ == CptLookup::Tree ? trees_[v].lookup(inst) : dense_row(v, inst);
  }
  std::span<const double> dense_row(VarId v, std::span<const Value> inst) const {
    return cpts_[v].row(cpts_[v].row_index(parents_[v], inst));
  }
  std::span<const double> tree_row(VarId v, std::span<const Value> inst) const {
    return trees_[v].lookup(inst);
  }

  bool operator==(const Network& other) const;

 private:
  friend Network absorb_evidence(const Network& net, const Evidence& ev);

  void link_children();

  std::string name_;
  std::vector<Variable> variables_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<Cpt> cpts_;
  std::vector<CptTree> trees_;
  CptLookup lookup_ = CptLookup::Tree;
};

/// Probability row of `var` given the parent values in `assignment`.
inline std::span<const double> cpt_lookup(const Network& net, VarId var,
                                          std::span<const Value> assignment) {
  return net.row(var, assignment);
}

inline CptTree build_tree(const Cpt& cpt, std::span<const VarId> parents) {
  return CptTree::build(cpt, parents);
}

/// Removes the outgoing arcs of every observed node. Each child keeps only
/// the table rows (and tree branches) consistent with the observation, so
/// lookups agree with `net` on every instantiation consistent with `ev`.
Network absorb_evidence(const Network& net, const Evidence& ev);

/// Mean fourth power of all table entries. Near-deterministic tables score
/// high and are placed early by the weighted ordering.
double ordering_weight(const Cpt& cpt);

/// Topological order. Among the variables whose parents are all placed,
/// picks the lowest id, or with `use_heuristic` the greatest
/// ordering_weight (ties to the lowest id).
Ordering topological_order(const Network& net, bool use_heuristic);

/// True when `ord` is a permutation and every parent precedes its child.
bool is_topological(const Network& net, const Ordering& ord);

// Text formats. Network file:
//   net <name>
//   var <name> <arity>              one per variable, in id order
//   parents <name> <p1> <p2> ...    for variables with parents
//   cpt <name>                      followed by one row per parent config
// Evidence file: one `<name> <value-index>` per line. '#' starts a comment.

/// Throws ParseError carrying the offending line number.
Network load_network(std::string_view text);
std::string save_network(const Network& net);
Network load_network_file(const std::string& path);

Evidence load_evidence(std::string_view text, const Network& net);
std::string save_evidence(const Evidence& ev, const Network& net);
Evidence load_evidence_file(const std::string& path, const Network& net);

}  // namespace bnstrat
