#include "bnstrat/stratified.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "bnstrat/error.hpp"

namespace bnstrat {

StratifiedGenerator::StratifiedGenerator(const Network& net, const Evidence& ev, Ordering ord,
                                         ProposalChoice proposal, std::size_t m, PointRule rule)
    : net_(&net),
      ord_(std::move(ord)),
      clamp_(ev.dense(net.size())),
      proposal_(proposal),
      m_(m),
      rule_(rule) {
  if (m_ == 0) throw Error("stratified generator needs at least one stratum");
  if (!is_topological(net, ord_)) throw Error("stratified generator needs a topological ordering");

  const std::size_t n = net.size();
  val_.assign(n, 0);
  l_.assign(n + 1, 0.0);
  h_.assign(n + 1, 1.0);
  for (VarId v = 0; v < n; ++v) {
    if (clamp_[v] >= 0) {
      val_[v] = clamp_[v];
    } else {
      arity_product_ *= static_cast<double>(net.arity(v));
    }
  }
  // Start from the instantiation with every free variable at 0.
  for (std::size_t j = 1; j <= n; ++j) {
    const VarId var = ord_[j - 1];
    if (clamp_[var] >= 0) {
      h_[j] = h_[j - 1];
    } else if (proposal_ == ProposalChoice::Uniform) {
      h_[j] = h_[j - 1] / static_cast<double>(net.arity(var));
    } else {
      h_[j] = h_[j - 1] * net.row(var, val_)[0];
      ++lookups_;
    }
  }
  last_restart_ = n + 1;
}

double StratifiedGenerator::point(Rng& rng) const {
  const double u = rule_ == PointRule::Median ? 0.5 : rng.uniform();
  const double i = static_cast<double>(stratum_);
  const double m = static_cast<double>(m_);
  const double f = (u + i - 1.0) / m;
  // Rounding of u + i - 1 may reach the next stratum's boundary.
  const double end = i / m;
  return f < end ? f : std::nextafter(end, 0.0);
}

WeightedSample StratifiedGenerator::next(Rng& rng) { return next_at(point(rng)); }

WeightedSample StratifiedGenerator::next_at(double f) {
  const Network& net = *net_;
  const std::size_t n = net.size();

  std::size_t j = binsearch_restart(h_, f, &comparisons_);
  last_restart_ = j;
  for (; j <= n; ++j) {
    const VarId var = ord_[j - 1];
    const double lo_parent = l_[j - 1];
    const double hi_parent = h_[j - 1];
    if (clamp_[var] >= 0) {
      l_[j] = lo_parent;
      h_[j] = hi_parent;
      continue;
    }
    ++assignments_;
    const std::size_t arity = net.arity(var);
    const double span = hi_parent - lo_parent;
    std::span<const double> row;
    if (proposal_ == ProposalChoice::Conditional) {
      row = net.row(var, val_);
      ++lookups_;
    }
    auto width = [&](std::size_t k) {
      return proposal_ == ProposalChoice::Uniform ? span / static_cast<double>(arity) : span * row[k];
    };
    // Subinterval ends never pass the parent's end, so h stays non-increasing.
    auto end_of = [&](double start, std::size_t k) { return std::min(start + width(k), hi_parent); };

    // Walk the values until the point falls below a subinterval's end.
    std::size_t k = 0;
    double lo = lo_parent;
    double hi = end_of(lo, 0);
    std::size_t last_open = width(0) > 0.0 ? 0 : arity;
    double last_lo = lo;
    while (f >= hi && k + 1 < arity) {
      ++k;
      lo = hi;
      hi = end_of(lo, k);
      if (width(k) > 0.0) {
        last_open = k;
        last_lo = lo;
      }
    }
    if (f >= hi) {
      // Accumulated rounding left the point past the last subinterval: the
      // last value with positive width takes everything up to the parent's end.
      if (last_open < arity) {
        k = last_open;
        lo = last_lo;
      }
      hi = hi_parent;
    }
    val_[var] = static_cast<Value>(k);
    l_[j] = lo;
    h_[j] = hi;
  }
  ++stratum_;
  return WeightedSample{val_, weight()};
}

double StratifiedGenerator::weight() {
  const Network& net = *net_;
  if (proposal_ == ProposalChoice::Conditional) {
    double p = 1.0;
    for (VarId v = 0; v < net.size(); ++v) {
      if (clamp_[v] < 0) continue;
      p *= net.row(v, val_)[static_cast<std::size_t>(val_[v])];
      ++lookups_;
    }
    return p;
  }
  lookups_ += net.size();
  return joint_probability(net, val_) * arity_product_;
}

std::size_t binsearch_restart(std::span<const double> h, double f, std::uint64_t* comparisons) {
  std::uint64_t count = 0;
  auto it = std::partition_point(h.begin() + 1, h.end(), [&](double bound) {
    ++count;
    return bound > f;
  });
  if (comparisons) *comparisons += count;
  return static_cast<std::size_t>(it - h.begin());
}

std::uint64_t assignment_bound(std::uint64_t n, std::uint64_t m) {
  if (n == 0 || m == 0) throw Error("assignment bound needs n >= 1 and m >= 1");
  const std::uint64_t floor_log_m = static_cast<std::uint64_t>(std::bit_width(m)) - 1;
  const std::uint64_t ceil_log_n = n <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(n - 1));
  const std::uint64_t leading = (std::uint64_t{1} << (floor_log_m + 1)) - 2;
  const std::uint64_t trailing = n > floor_log_m + 1 ? (n - floor_log_m - 1) * m : 0;
  return leading + trailing + m * ceil_log_n;
}

std::uint64_t required_samples(double a, double delta, double epsilon, double bel) {
  if (!(a > 0.0)) throw Error("maximum weight must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (!(bel > 0.0)) throw Error("target belief must be positive");
  return static_cast<std::uint64_t>(std::ceil(a * std::log(4.0 / delta) / (epsilon * epsilon * bel)));
}

}  // namespace bnstrat
