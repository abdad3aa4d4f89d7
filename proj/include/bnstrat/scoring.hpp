#pragma once

#include <span>
#include <vector>

#include "bnstrat/model.hpp"
#include "bnstrat/oracle.hpp"

namespace bnstrat {

/// An instantiation with its importance weight
/// p = P(S) / P(selecting S), up to a per-scheme constant.
struct WeightedSample {
  Instantiation s;
  double p = 1.0;
};

/// Accumulated score per variable and value.
class BeliefScores {
 public:
  BeliefScores() = default;
  explicit BeliefScores(const Network& net);

  std::size_t size() const noexcept { return rows_.size(); }
  std::span<const double> row(VarId v) const { return rows_[v]; }
  std::span<double> row(VarId v) { return rows_[v]; }
  void add(VarId v, Value value, double p) { rows_[v][static_cast<std::size_t>(value)] += p; }

  /// Sum of sample weights added so far.
  double total_weight() const noexcept { return total_; }
  void add_weight(double p) noexcept { total_ += p; }

  /// Adds another run's scores; the tables must have the same shape.
  void merge(const BeliefScores& other);

 private:
  std::vector<std::vector<double>> rows_;
  double total_ = 0.0;
};

/// Adds p to the score of the value each variable takes in the sample.
void simple_update(BeliefScores& scores, const WeightedSample& ws);

/// Adds p spread over every value of each unobserved variable in proportion
/// to its Markov-blanket conditional; observed variables as simple_update.
/// Returns the number of table lookups spent.
std::size_t blanket_update(BeliefScores& scores, const Network& net, const Evidence& ev,
                           const WeightedSample& ws);

/// Each row divided by its own sum. Throws ZeroScores on a zero-sum row.
MarginalTable normalize(const BeliefScores& scores);

/// Lower clamp on estimated probabilities inside divergence().
inline constexpr double kDivergenceFloor = 1e-12;

/// Mean over unobserved variables of the KL divergence (base 2) from the
/// exact to the estimated marginal. Values with exact probability 0
/// contribute nothing; estimates are clamped below at kDivergenceFloor.
double divergence(const MarginalTable& exact, const MarginalTable& est, const Evidence& ev = {});

}  // namespace bnstrat
