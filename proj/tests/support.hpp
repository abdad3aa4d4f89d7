#pragma once

// Test-only helpers: the fixture network, random DAG generation, and
// enumeration-based reference computations kept apart from the library code
// they check.

#include <cmath>
#include <string>
#include <vector>

#include "bnstrat/model.hpp"
#include "bnstrat/oracle.hpp"
#include "bnstrat/rng.hpp"

namespace testing {

using namespace bnstrat;

// a, b, c binary; a->b, a->c, b->c. P(a=0)=0.5, P(b=0|a=0)=0.3,
// P(b=0|a=1)=0.2, P(c=0|a,b)=0.5 everywhere.
inline const char* kFixture3 = R"(net fixture3
var a 2
var b 2
var c 2
parents b a
parents c a b
cpt a
0.5 0.5
cpt b
0.3 0.7
0.2 0.8
cpt c
0.5 0.5
0.5 0.5
0.5 0.5
0.5 0.5
)";

inline Network fixture3() { return load_network(kFixture3); }

inline Instantiation inst(std::initializer_list<Value> values) { return Instantiation(values); }

struct DagSpec {
  std::size_t n = 6;
  std::size_t min_arity = 2;
  std::size_t max_arity = 2;
  std::size_t max_parents = 3;
  /// Chance that a table entry is forced to zero (before renormalizing).
  double zero_chance = 0.0;
};

inline std::vector<double> random_row(Rng& rng, std::size_t arity, double zero_chance) {
  std::vector<double> row(arity);
  double sum = 0.0;
  for (double& x : row) {
    x = rng.uniform() < zero_chance ? 0.0 : -std::log(rng.uniform_open());
    sum += x;
  }
  if (sum == 0.0) {
    row[rng.below(arity)] = 1.0;
    return row;
  }
  for (double& x : row) x /= sum;
  return row;
}

/// Random DAG: each variable takes up to max_parents parents among the
/// lower ids, listed in random order so the table layout is exercised.
inline Network random_dag(std::uint64_t seed, DagSpec spec = {}) {
  Rng rng(seed);
  std::vector<Variable> vars;
  std::vector<std::vector<VarId>> parents(spec.n);
  std::vector<Cpt> cpts;
  for (VarId v = 0; v < spec.n; ++v) {
    const std::size_t arity = spec.min_arity + rng.below(spec.max_arity - spec.min_arity + 1);
    vars.push_back(Variable{v, "v" + std::to_string(v), arity});
  }
  for (VarId v = 1; v < spec.n; ++v) {
    std::vector<VarId> pool;
    for (VarId p = 0; p < v; ++p) pool.push_back(p);
    const std::size_t k = rng.below(std::min(spec.max_parents, v) + 1);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pick = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[pick]);
      parents[v].push_back(pool[i]);
    }
  }
  for (VarId v = 0; v < spec.n; ++v) {
    std::vector<std::size_t> arities;
    std::size_t rows = 1;
    for (VarId p : parents[v]) {
      arities.push_back(vars[p].arity);
      rows *= vars[p].arity;
    }
    std::vector<double> entries;
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = random_row(rng, vars[v].arity, spec.zero_chance);
      entries.insert(entries.end(), row.begin(), row.end());
    }
    cpts.emplace_back(vars[v].arity, std::move(arities), std::move(entries));
  }
  return Network("random", std::move(vars), std::move(parents), std::move(cpts));
}

/// Every instantiation of `net`, variable 0 fastest.
inline std::vector<Instantiation> all_instantiations(const Network& net) {
  std::vector<Instantiation> out;
  Instantiation s(net.size(), 0);
  while (true) {
    out.push_back(s);
    std::size_t i = 0;
    while (i < net.size() && static_cast<std::size_t>(++s[i]) == net.arity(i)) s[i++] = 0;
    if (i == net.size()) break;
  }
  return out;
}

inline bool consistent(const Instantiation& s, const Evidence& ev) {
  for (auto [var, value] : ev)
    if (s[var] != value) return false;
  return true;
}

/// P(x | every other variable) as a ratio of joint probabilities.
inline std::vector<double> enumerated_full_conditional(const Network& net, Instantiation s, VarId x) {
  std::vector<double> out(net.arity(x));
  double total = 0.0;
  for (std::size_t v = 0; v < out.size(); ++v) {
    s[x] = static_cast<Value>(v);
    out[v] = joint_probability(net, s);
    total += out[v];
  }
  for (double& p : out) p /= total;
  return out;
}

/// Random evidence on `count` distinct variables.
inline Evidence random_evidence(const Network& net, Rng& rng, std::size_t count) {
  Evidence ev;
  while (ev.size() < std::min(count, net.size())) {
    const VarId v = rng.below(net.size());
    if (!ev.observed(v)) ev.set(v, static_cast<Value>(rng.below(net.arity(v))));
  }
  return ev;
}

}  // namespace testing
