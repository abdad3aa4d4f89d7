#include "bnstrat/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "bnstrat/error.hpp"

namespace bnstrat {

Cpt::Cpt(std::size_t arity, std::vector<std::size_t> parent_arities, std::vector<double> entries)
    : arity_(arity), parent_arities_(std::move(parent_arities)), entries_(std::move(entries)) {
  std::size_t rows = 1;
  for (std::size_t k : parent_arities_) rows *= k;
  if (arity_ < 1) throw Error("table needs at least one value");
  if (entries_.size() != rows * arity_) {
    throw Error("table has " + std::to_string(entries_.size()) + " entries, expected " +
                std::to_string(rows * arity_));
  }
}

std::size_t Cpt::row_index(std::span<const VarId> parents, std::span<const Value> inst) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    index = index * parent_arities_[i] + static_cast<std::size_t>(inst[parents[i]]);
  }
  return index;
}

std::optional<Value> Evidence::value(VarId var) const {
  auto it = values_.find(var);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::vector<Value> Evidence::dense(std::size_t n) const {
  std::vector<Value> out(n, -1);
  for (auto [var, value] : values_) out.at(var) = value;
  return out;
}

void Evidence::validate(const Network& net) const {
  for (auto [var, value] : values_) {
    if (var >= net.size()) throw Error("evidence on unknown variable id " + std::to_string(var));
    if (value < 0 || static_cast<std::size_t>(value) >= net.arity(var)) {
      throw Error("evidence value " + std::to_string(value) + " out of range for " +
                  net.variable(var).name);
    }
  }
}

namespace {

bool has_cycle(const std::vector<std::vector<VarId>>& parents) {
  const std::size_t n = parents.size();
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<VarId>> children(n);
  for (VarId v = 0; v < n; ++v) {
    pending[v] = parents[v].size();
    for (VarId p : parents[v]) children[p].push_back(v);
  }
  std::vector<VarId> ready;
  for (VarId v = 0; v < n; ++v)
    if (pending[v] == 0) ready.push_back(v);
  std::size_t placed = 0;
  while (!ready.empty()) {
    VarId v = ready.back();
    ready.pop_back();
    ++placed;
    for (VarId c : children[v])
      if (--pending[c] == 0) ready.push_back(c);
  }
  return placed != n;
}

}  // namespace

Network::Network(std::string name, std::vector<Variable> variables,
                 std::vector<std::vector<VarId>> parents, std::vector<Cpt> cpts)
    : name_(std::move(name)),
      variables_(std::move(variables)),
      parents_(std::move(parents)),
      cpts_(std::move(cpts)) {
  const std::size_t n = variables_.size();
  if (parents_.size() != n || cpts_.size() != n) {
    throw Error("network needs one parent list and one table per variable");
  }
  for (VarId v = 0; v < n; ++v) {
    const Variable& var = variables_[v];
    if (var.id != v) throw Error("variable ids must be consecutive from 0");
    if (var.arity < 2) throw Error("variable " + var.name + " has arity below 2");
    std::vector<VarId> seen;
    for (VarId p : parents_[v]) {
      if (p >= n) throw Error("variable " + var.name + " has an undeclared parent");
      if (p == v) throw Error("variable " + var.name + " is its own parent");
      if (std::find(seen.begin(), seen.end(), p) != seen.end()) {
        throw Error("variable " + var.name + " lists parent " + variables_[p].name + " twice");
      }
      seen.push_back(p);
    }
    const Cpt& cpt = cpts_[v];
    if (cpt.arity() != var.arity || cpt.parent_arities().size() != parents_[v].size()) {
      throw Error("table of " + var.name + " does not match its variable and parents");
    }
    for (std::size_t i = 0; i < parents_[v].size(); ++i) {
      if (cpt.parent_arities()[i] != variables_[parents_[v][i]].arity) {
        throw Error("table of " + var.name + " has a wrong parent arity");
      }
    }
    for (std::size_t r = 0; r < cpt.rows(); ++r) {
      double sum = 0.0;
      for (double p : cpt.row(r)) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error("table of " + var.name + " has an entry outside [0,1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw Error("table of " + var.name + " row " + std::to_string(r) + " sums to " +
                    std::to_string(sum));
      }
    }
  }
  if (has_cycle(parents_)) throw Error("network structure contains a cycle");

  trees_.reserve(n);
  for (VarId v = 0; v < n; ++v) trees_.push_back(CptTree::build(cpts_[v], parents_[v]));
  link_children();
}

void Network::link_children() {
  children_.assign(variables_.size(), {});
  for (VarId v = 0; v < variables_.size(); ++v)
    for (VarId p : parents_[v]) children_[p].push_back(v);
}

std::optional<VarId> Network::find(std::string_view name) const {
  for (const Variable& v : variables_)
    if (v.name == name) return v.id;
  return std::nullopt;
}

std::size_t Network::arc_count() const {
  std::size_t arcs = 0;
  for (const auto& p : parents_) arcs += p.size();
  return arcs;
}

Network Network::with_lookup(CptLookup mode) const {
  Network copy = *this;
  copy.lookup_ = mode;
  return copy;
}

bool Network::operator==(const Network& other) const {
  if (name_ != other.name_ || size() != other.size() || parents_ != other.parents_) return false;
  for (VarId v = 0; v < size(); ++v) {
    if (variables_[v].name != other.variables_[v].name ||
        variables_[v].arity != other.variables_[v].arity)
      return false;
    auto a = cpts_[v].entries();
    auto b = other.cpts_[v].entries();
    if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) return false;
  }
  return true;
}

Network absorb_evidence(const Network& net, const Evidence& ev) {
  ev.validate(net);
  if (ev.empty()) return net;

  Network out = net;
  for (VarId c = 0; c < net.size(); ++c) {
    const auto old_parents = net.parents(c);
    std::vector<VarId> kept;
    std::vector<std::size_t> kept_arities;
    for (VarId p : old_parents) {
      if (!ev.observed(p)) {
        kept.push_back(p);
        kept_arities.push_back(net.arity(p));
      }
    }
    if (kept.size() == old_parents.size()) continue;

    // Slice the dense table: one row per configuration of the kept parents,
    // read from the original row with the observed parents at their values.
    const Cpt& old = net.cpt(c);
    std::size_t rows = 1;
    for (std::size_t k : kept_arities) rows *= k;
    std::vector<double> entries;
    entries.reserve(rows * old.arity());
    Instantiation inst(net.size(), 0);
    for (auto [var, value] : ev) inst[var] = value;
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t rest = r;
      for (std::size_t i = kept.size(); i-- > 0;) {
        inst[kept[i]] = static_cast<Value>(rest % kept_arities[i]);
        rest /= kept_arities[i];
      }
      auto row = old.row(old.row_index(old_parents, inst));
      entries.insert(entries.end(), row.begin(), row.end());
    }

    CptTree tree = net.tree(c);
    for (VarId p : old_parents)
      if (auto value = ev.value(p)) tree = tree.pruned(p, *value);

    out.cpts_[c] = Cpt(old.arity(), std::move(kept_arities), std::move(entries));
    out.parents_[c] = std::move(kept);
    out.trees_[c] = std::move(tree);
  }
  out.link_children();
  return out;
}

double ordering_weight(const Cpt& cpt) {
  const auto entries = cpt.entries();
  if (entries.empty()) return 0.0;
  double sum = 0.0;
  for (double p : entries) sum += (p * p) * (p * p);
  return sum / static_cast<double>(entries.size());
}

Ordering topological_order(const Network& net, bool use_heuristic) {
  const std::size_t n = net.size();
  std::vector<double> weight(n, 0.0);
  if (use_heuristic)
    for (VarId v = 0; v < n; ++v) weight[v] = ordering_weight(net.cpt(v));

  // Highest weight first, then lowest id.
  auto later = [&](VarId a, VarId b) {
    if (weight[a] != weight[b]) return weight[a] < weight[b];
    return a > b;
  };
  std::priority_queue<VarId, std::vector<VarId>, decltype(later)> ready(later);
  std::vector<std::size_t> pending(n);
  for (VarId v = 0; v < n; ++v) {
    pending[v] = net.parents(v).size();
    if (pending[v] == 0) ready.push(v);
  }
  Ordering ord;
  ord.reserve(n);
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    ord.push_back(v);
    for (VarId c : net.children(v))
      if (--pending[c] == 0) ready.push(c);
  }
  return ord;
}

bool is_topological(const Network& net, const Ordering& ord) {
  const std::size_t n = net.size();
  if (ord.size() != n) return false;
  std::vector<std::size_t> position(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (ord[i] >= n || position[ord[i]] != n) return false;
    position[ord[i]] = i;
  }
  for (VarId v = 0; v < n; ++v)
    for (VarId p : net.parents(v))
      if (position[p] >= position[v]) return false;
  return true;
}

}  // namespace bnstrat
