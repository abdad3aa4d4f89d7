#pragma once

// Brute-force ground truth: everything here enumerates instantiations and is
// meant for small networks and for checking the samplers.

#include <functional>
#include <span>
#include <vector>

#include "bnstrat/model.hpp"

namespace bnstrat {

/// Closed in notation, used half-open [lo, hi) for membership.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Per-variable probability row over the variable's values.
struct MarginalTable {
  std::vector<std::vector<double>> rows;

  std::size_t size() const noexcept { return rows.size(); }
  const std::vector<double>& operator[](VarId v) const { return rows[v]; }
  std::vector<double>& operator[](VarId v) { return rows[v]; }
};

/// Interval widths for the stratified schemes: every value equally likely
/// (Uniform), or the variable's table row given its sampled parents
/// (Conditional).
enum class ProposalChoice { Uniform, Conditional };

/// Which measure lays instantiations out on the unit interval.
struct Measure {
  enum class Kind { TrueJoint, Proposal };
  Kind kind = Kind::TrueJoint;
  ProposalChoice proposal = ProposalChoice::Conditional;

  static Measure joint() { return {}; }
  static Measure of(ProposalChoice p) { return {Kind::Proposal, p}; }
};

struct EnumerationLimits {
  std::size_t max_variables = 25;
};

/// Product of table entries for a full instantiation.
double joint_probability(const Network& net, std::span<const Value> s);

/// Proposal measure of `s`: zero when `s` contradicts `ev`, otherwise the
/// product over unobserved variables of 1/arity (Uniform) or of the table
/// entry given the parents in `s` (Conditional).
double proposal_probability(const Network& net, const Evidence& ev, ProposalChoice proposal,
                            std::span<const Value> s);

double measure_of(const Network& net, const Evidence& ev, Measure measure, std::span<const Value> s);

/// Calls `fn` for every instantiation in mixed-radix order (variable 0
/// least significant). Throws EnumerationGuard when the network has more
/// variables than `limits` allows.
void for_each_instantiation(const Network& net, const std::function<void(const Instantiation&)>& fn,
                            EnumerationLimits limits = {});

/// Posterior marginals by full enumeration. Observed variables get a point
/// mass. Throws ZeroProbabilityEvidence when P(ev) = 0.
MarginalTable exact_marginals(const Network& net, const Evidence& ev, EnumerationLimits limits = {});

/// True when the underlying undirected graph has no cycle.
bool is_polytree(const Network& net);

/// Prior marginals of a polytree by one forward pass. In a polytree with no
/// evidence the parents of any node are mutually independent, so
/// P(x) = sum over parent configs of P(x | config) * prod P(parent value).
/// Throws Error when `net` is not a polytree.
MarginalTable polytree_prior_marginals(const Network& net);

/// True when `a` precedes `b` in the lexicographic order induced by `ord`
/// on the first `k` positions.
bool prefix_less(const Ordering& ord, std::span<const Value> a, std::span<const Value> b, std::size_t k);
bool prefix_equal(const Ordering& ord, std::span<const Value> a, std::span<const Value> b, std::size_t k);

/// Interval of the k-prefix of `s` under `measure`, by explicit summation:
/// lo = mass of instantiations with a smaller k-prefix, hi = lo + mass of the
/// prefix's cylinder. Evidence only affects the proposal measure.
Interval prefix_interval_oracle(const Network& net, const Evidence& ev, const Ordering& ord,
                                std::span<const Value> s, std::size_t k, Measure measure,
                                EnumerationLimits limits = {});

/// Instantiation whose full interval contains `f`, found by scanning every
/// instantiation in `ord` order. The last positive-mass instantiation owns
/// everything up to and including 1.
Instantiation locate_by_scan(const Network& net, const Evidence& ev, const Ordering& ord, Measure measure,
                             double f, EnumerationLimits limits = {});

/// Distribution of `x` given every other value in `s`:
/// r(v) proportional to P(x=v | parents) * prod over children c of P(s_c | parents of c, x=v).
/// Throws DegenerateBlanket when every product is zero.
std::vector<double> blanket_conditional(const Network& net, std::span<const Value> s, VarId x);

/// Allocation-free form for the sampling loops. `s[x]` is modified during the
/// call and restored on return. Returns the number of table lookups made.
std::size_t blanket_conditional_into(const Network& net, std::span<Value> s, VarId x, std::span<double> out);

}  // namespace bnstrat
