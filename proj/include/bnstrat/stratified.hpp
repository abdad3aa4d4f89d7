#pragma once

#include <cstdint>
#include <span>

#include "bnstrat/model.hpp"
#include "bnstrat/oracle.hpp"
#include "bnstrat/rng.hpp"
#include "bnstrat/scoring.hpp"

namespace bnstrat {

/// Where the point inside a stratum is taken.
enum class PointRule { Random, Median };

/// Stratified sample generator.
///
/// The unit interval is laid out by the proposal measure: instantiations in
/// lexicographic order (by `ord`) each own a half-open subinterval whose width
/// is their proposal probability. The interval is cut into m equal strata and
/// one point per stratum, taken in ascending order, is mapped back to an
/// instantiation.
///
/// The generator keeps, for the current instantiation, the prefix intervals
/// [lower()[j], upper()[j]) of its first j ordered variables (position 0 is
/// the whole unit interval). Because points ascend, a new point only leaves
/// the current prefix intervals from some depth on: a binary search over the
/// non-increasing upper bounds finds that depth, and only the variables from
/// there down are reassigned.
///
/// `net` must outlive the generator.
class StratifiedGenerator {
 public:
  StratifiedGenerator(const Network& net, const Evidence& ev, Ordering ord, ProposalChoice proposal,
                      std::size_t m, PointRule rule);

  /// Next stratum index, 1-based.
  std::size_t stratum() const noexcept { return stratum_; }
  std::size_t strata() const noexcept { return m_; }
  bool done() const noexcept { return stratum_ > m_; }

  /// Point for the current stratum: (u + i - 1) / m with u uniform in [0, 1)
  /// for Random, u = 1/2 for Median. Median does not touch `rng`.
  double point(Rng& rng) const;

  /// Draws the current stratum's point and maps it to a sample.
  WeightedSample next(Rng& rng);

  /// Maps the given point to a sample and advances the stratum index. Points
  /// must be non-decreasing across calls.
  WeightedSample next_at(double f);

  const Instantiation& values() const noexcept { return val_; }
  std::span<const double> lower() const noexcept { return l_; }
  std::span<const double> upper() const noexcept { return h_; }
  const Ordering& ordering() const noexcept { return ord_; }
  ProposalChoice proposal() const noexcept { return proposal_; }

  /// Position the last sample was regenerated from; n + 1 when the point
  /// fell inside the previous instantiation's interval.
  std::size_t last_restart() const noexcept { return last_restart_; }

  /// Unobserved variables assigned a value so far.
  std::uint64_t assignments() const noexcept { return assignments_; }
  /// Bound comparisons made by the restart searches.
  std::uint64_t comparisons() const noexcept { return comparisons_; }
  /// Table rows read, including those for the sample weights.
  std::uint64_t lookups() const noexcept { return lookups_; }

 private:
  double weight();

  const Network* net_;
  Ordering ord_;
  std::vector<Value> clamp_;  // observed value per variable, -1 if free
  ProposalChoice proposal_;
  std::size_t m_;
  PointRule rule_;
  std::size_t stratum_ = 1;
  double arity_product_ = 1.0;

  Instantiation val_;
  std::vector<double> l_;
  std::vector<double> h_;
  std::size_t last_restart_ = 0;
  std::uint64_t assignments_ = 0;
  std::uint64_t comparisons_ = 0;
  std::uint64_t lookups_ = 0;
};

/// Smallest position j >= 1 with h[j] <= f, or h.size() when there is none
/// (f lies inside every interval of the previous instantiation). `h` is
/// non-increasing with h[0] = 1. Adds the comparisons made to `comparisons`.
std::size_t binsearch_restart(std::span<const double> h, double f, std::uint64_t* comparisons = nullptr);

/// Upper bound on the work of generating m stratified samples over n binary
/// variables: 2^(floor(log2 m) + 1) - 2 assignments to the leading variables,
/// m assignments to each of the remaining n - floor(log2 m) - 1 (floored at
/// zero), and m binary searches of ceil(log2 n) comparisons.
std::uint64_t assignment_bound(std::uint64_t n, std::uint64_t m);

/// ceil(a * ln(4 / delta) / (epsilon^2 * bel)): samples needed for relative
/// error below epsilon with probability at least 1 - delta, a being the
/// largest sample weight. Throws Error outside a > 0, 0 < delta < 1,
/// 0 < epsilon < 1, bel > 0.
std::uint64_t required_samples(double a, double delta, double epsilon, double bel);

}  // namespace bnstrat
