#include "bnstrat/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "bnstrat/error.hpp"

namespace bnstrat {

BeliefScores::BeliefScores(const Network& net) {
  rows_.reserve(net.size());
  for (VarId v = 0; v < net.size(); ++v) rows_.emplace_back(net.arity(v), 0.0);
}

void BeliefScores::merge(const BeliefScores& other) {
  if (other.rows_.size() != rows_.size()) throw Error("cannot merge scores of different networks");
  for (std::size_t v = 0; v < rows_.size(); ++v) {
    if (other.rows_[v].size() != rows_[v].size()) throw Error("cannot merge scores of different networks");
    for (std::size_t k = 0; k < rows_[v].size(); ++k) rows_[v][k] += other.rows_[v][k];
  }
  total_ += other.total_;
}

void simple_update(BeliefScores& scores, const WeightedSample& ws) {
  for (VarId v = 0; v < scores.size(); ++v) scores.add(v, ws.s[v], ws.p);
  scores.add_weight(ws.p);
}

std::size_t blanket_update(BeliefScores& scores, const Network& net, const Evidence& ev,
                           const WeightedSample& ws) {
  Instantiation s = ws.s;
  std::vector<double> cond;
  std::size_t lookups = 0;
  for (VarId v = 0; v < scores.size(); ++v) {
    if (ev.observed(v)) {
      scores.add(v, s[v], ws.p);
      continue;
    }
    cond.resize(net.arity(v));
    lookups += blanket_conditional_into(net, s, v, cond);
    auto row = scores.row(v);
    for (std::size_t k = 0; k < cond.size(); ++k) row[k] += ws.p * cond[k];
  }
  scores.add_weight(ws.p);
  return lookups;
}

MarginalTable normalize(const BeliefScores& scores) {
  MarginalTable out;
  out.rows.reserve(scores.size());
  for (VarId v = 0; v < scores.size(); ++v) {
    const auto row = scores.row(v);
    double sum = 0.0;
    for (double x : row) sum += x;
    if (!(sum > 0.0) || !std::isfinite(sum)) {
      throw ZeroScores("scores of variable " + std::to_string(v) + " sum to zero");
    }
    std::vector<double> normalized(row.begin(), row.end());
    for (double& x : normalized) x /= sum;
    out.rows.push_back(std::move(normalized));
  }
  return out;
}

double divergence(const MarginalTable& exact, const MarginalTable& est, const Evidence& ev) {
  if (exact.size() != est.size()) throw Error("divergence needs tables over the same variables");
  double total = 0.0;
  std::size_t counted = 0;
  for (VarId v = 0; v < exact.size(); ++v) {
    if (ev.observed(v)) continue;
    if (exact[v].size() != est[v].size()) throw Error("divergence needs tables with the same arities");
    double kl = 0.0;
    for (std::size_t k = 0; k < exact[v].size(); ++k) {
      const double p = exact[v][k];
      if (p <= 0.0) continue;
      kl += p * std::log2(p / std::max(est[v][k], kDivergenceFloor));
    }
    total += kl;
    ++counted;
  }
  return counted ? total / static_cast<double>(counted) : 0.0;
}

}  // namespace bnstrat
