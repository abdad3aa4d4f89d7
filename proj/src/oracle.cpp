#include "bnstrat/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "bnstrat/error.hpp"

namespace bnstrat {

double joint_probability(const Network& net, std::span<const Value> s) {
  double p = 1.0;
  for (VarId v = 0; v < net.size(); ++v) p *= net.row(v, s)[static_cast<std::size_t>(s[v])];
  return p;
}

double proposal_probability(const Network& net, const Evidence& ev, ProposalChoice proposal,
                            std::span<const Value> s) {
  double q = 1.0;
  for (VarId v = 0; v < net.size(); ++v) {
    if (auto e = ev.value(v)) {
      if (s[v] != *e) return 0.0;
      continue;
    }
    q *= proposal == ProposalChoice::Uniform ? 1.0 / static_cast<double>(net.arity(v))
                                             : net.row(v, s)[static_cast<std::size_t>(s[v])];
  }
  return q;
}

double measure_of(const Network& net, const Evidence& ev, Measure measure, std::span<const Value> s) {
  return measure.kind == Measure::Kind::TrueJoint ? joint_probability(net, s)
                                                  : proposal_probability(net, ev, measure.proposal, s);
}

void for_each_instantiation(const Network& net, const std::function<void(const Instantiation&)>& fn,
                            EnumerationLimits limits) {
  const std::size_t n = net.size();
  if (n > limits.max_variables) {
    throw EnumerationGuard("enumeration refused: network has " + std::to_string(n) +
                           " variables, limit is " + std::to_string(limits.max_variables));
  }
  Instantiation s(n, 0);
  while (true) {
    fn(s);
    std::size_t i = 0;
    while (i < n && static_cast<std::size_t>(++s[i]) == net.arity(i)) s[i++] = 0;
    if (i == n) break;
  }
}

MarginalTable exact_marginals(const Network& net, const Evidence& ev, EnumerationLimits limits) {
  ev.validate(net);
  MarginalTable out;
  for (VarId v = 0; v < net.size(); ++v) out.rows.emplace_back(net.arity(v), 0.0);
  double total = 0.0;
  for_each_instantiation(
      net,
      [&](const Instantiation& s) {
        for (auto [var, value] : ev)
          if (s[var] != value) return;
        const double p = joint_probability(net, s);
        total += p;
        for (VarId v = 0; v < net.size(); ++v) out.rows[v][static_cast<std::size_t>(s[v])] += p;
      },
      limits);
  if (!(total > 0.0)) throw ZeroProbabilityEvidence("evidence has probability zero");
  for (auto& row : out.rows)
    for (double& p : row) p /= total;
  for (auto [var, value] : ev) {
    std::fill(out.rows[var].begin(), out.rows[var].end(), 0.0);
    out.rows[var][static_cast<std::size_t>(value)] = 1.0;
  }
  return out;
}

bool is_polytree(const Network& net) {
  // Union-find over the undirected skeleton; any arc joining two already
  // connected nodes closes a cycle.
  std::vector<VarId> root(net.size());
  std::iota(root.begin(), root.end(), VarId{0});
  auto find = [&](VarId v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (VarId v = 0; v < net.size(); ++v) {
    for (VarId p : net.parents(v)) {
      const VarId a = find(v), b = find(p);
      if (a == b) return false;
      root[a] = b;
    }
  }
  return true;
}

MarginalTable polytree_prior_marginals(const Network& net) {
  if (!is_polytree(net)) throw Error("forward marginal propagation needs a polytree");
  MarginalTable out;
  out.rows.resize(net.size());
  for (VarId v : topological_order(net, false)) {
    const auto parents = net.parents(v);
    std::vector<double> row(net.arity(v), 0.0);
    Instantiation s(net.size(), 0);
    // Walk all parent configurations, last parent fastest.
    while (true) {
      double weight = 1.0;
      for (VarId p : parents) weight *= out.rows[p][static_cast<std::size_t>(s[p])];
      const auto cond = net.row(v, s);
      for (std::size_t k = 0; k < row.size(); ++k) row[k] += weight * cond[k];
      std::size_t i = parents.size();
      while (i > 0) {
        const VarId p = parents[i - 1];
        if (static_cast<std::size_t>(++s[p]) < net.arity(p)) break;
        s[p] = 0;
        --i;
      }
      if (i == 0) break;
    }
    out.rows[v] = std::move(row);
  }
  return out;
}

bool prefix_less(const Ordering& ord, std::span<const Value> a, std::span<const Value> b, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    const VarId v = ord[i];
    if (a[v] != b[v]) return a[v] < b[v];
  }
  return false;
}

bool prefix_equal(const Ordering& ord, std::span<const Value> a, std::span<const Value> b, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i)
    if (a[ord[i]] != b[ord[i]]) return false;
  return true;
}

Interval prefix_interval_oracle(const Network& net, const Evidence& ev, const Ordering& ord,
                                std::span<const Value> s, std::size_t k, Measure measure,
                                EnumerationLimits limits) {
  double below = 0.0, cylinder = 0.0;
  for_each_instantiation(
      net,
      [&](const Instantiation& t) {
        if (prefix_less(ord, t, s, k)) {
          below += measure_of(net, ev, measure, t);
        } else if (prefix_equal(ord, t, s, k)) {
          cylinder += measure_of(net, ev, measure, t);
        }
      },
      limits);
  return Interval{below, below + cylinder};
}

Instantiation locate_by_scan(const Network& net, const Evidence& ev, const Ordering& ord, Measure measure,
                             double f, EnumerationLimits limits) {
  std::vector<std::pair<Instantiation, double>> all;
  for_each_instantiation(
      net, [&](const Instantiation& t) { all.emplace_back(t, measure_of(net, ev, measure, t)); }, limits);
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    return prefix_less(ord, a.first, b.first, ord.size());
  });
  double hi = 0.0;
  const Instantiation* last = nullptr;
  for (const auto& [t, mass] : all) {
    if (mass <= 0.0) continue;
    hi += mass;
    last = &t;
    if (f < hi) return t;
  }
  if (!last) throw Error("measure has no mass");
  return *last;
}

std::size_t blanket_conditional_into(const Network& net, std::span<Value> s, VarId x, std::span<double> out) {
  const Value saved = s[x];
  const auto own = net.row(x, s);
  const auto children = net.children(x);
  double total = 0.0;
  std::size_t lookups = 1;
  for (std::size_t v = 0; v < out.size(); ++v) {
    double p = own[v];
    if (p > 0.0) {
      s[x] = static_cast<Value>(v);
      for (VarId c : children) p *= net.row(c, s)[static_cast<std::size_t>(s[c])];
      lookups += children.size();
    }
    out[v] = p;
    total += p;
  }
  s[x] = saved;
  if (!(total > 0.0)) {
    throw DegenerateBlanket("Markov blanket conditional of " + net.variable(x).name + " is all zero");
  }
  for (double& p : out) p /= total;
  return lookups;
}

std::vector<double> blanket_conditional(const Network& net, std::span<const Value> s, VarId x) {
  Instantiation scratch(s.begin(), s.end());
  std::vector<double> out(net.arity(x));
  blanket_conditional_into(net, scratch, x, out);
  return out;
}

}  // namespace bnstrat
