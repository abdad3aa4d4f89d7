// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Also prints an informational dense-vs-tree timing report.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bnstrat/bench.hpp"
#include "bnstrat/error.hpp"
#include "bnstrat/netgen.hpp"
#include "bnstrat/samplers.hpp"
#include "bnstrat/stratified.hpp"
#include "support.hpp"

using namespace bnstrat;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    // Only the first few failures are listed.
    if (failures.size() < 8) failures.push_back(what);
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

RunConfig config(SchemeKind scheme, std::size_t m, std::uint64_t seed) {
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.m = m;
  cfg.seed = seed;
  return cfg;
}

const SchemeKind kAllSchemes[] = {SchemeKind::Simple, SchemeKind::Likelihood, SchemeKind::Pearl,
                                  SchemeKind::StratSimple, SchemeKind::StratLikelihood};

// The ten 50-variable polytrees shared by criteria 4, 6 and 7.
const std::vector<Network>& suite50() {
  static const std::vector<Network> nets = [] {
    std::vector<Network> out;
    for (std::uint64_t i = 0; i < 10; ++i) out.push_back(random_polytree_network({.n = 50, .seed = 7 + i}));
    return out;
  }();
  return nets;
}

// The five 10-variable polytrees of criteria 5 and 9.
const std::vector<Network>& suite10() {
  static const std::vector<Network> nets = [] {
    std::vector<Network> out;
    for (std::uint64_t i = 0; i < 5; ++i) out.push_back(random_polytree_network({.n = 10, .seed = 500 + i}));
    return out;
  }();
  return nets;
}

// Evidence on the highest-id variable without children.
Evidence leaf_evidence(const Network& net) {
  Evidence ev;
  for (VarId v = net.size(); v-- > 0;) {
    if (net.children(v).empty()) {
      ev.set(v, 1);
      break;
    }
  }
  return ev;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// 1. Worked example on the fixture.
Verdict worked_example() {
  Verdict v;
  const Network net = testing::fixture3();
  const Ordering ord{0, 1, 2};
  const auto s010 = testing::inst({0, 1, 0});
  const Interval i3 = prefix_interval_oracle(net, {}, ord, s010, 3, Measure::joint());
  const Interval i2 = prefix_interval_oracle(net, {}, ord, s010, 2, Measure::joint());
  const Interval i0 = prefix_interval_oracle(net, {}, ord, s010, 0, Measure::joint());
  v.require(near(i3.lo, 0.15, 1e-12) && near(i3.hi, 0.325, 1e-12), "I(010) != [0.15, 0.325]");
  v.require(near(i2.lo, 0.15, 1e-12) && near(i2.hi, 0.5, 1e-12), "I_2(01) != [0.15, 0.5]");
  v.require(near(i0.lo, 0.0, 1e-12) && near(i0.hi, 1.0, 1e-12), "I_0 != [0, 1]");
  v.require(near(joint_probability(net, s010), 0.175, 1e-12), "P(010) != 0.175");

  StratifiedGenerator gen(net, {}, ord, ProposalChoice::Conditional, 3, PointRule::Median);
  const auto first = gen.next_at(0.2345);
  v.require(first.s == s010, "0.2345 does not map to 010");
  v.require(near(gen.lower()[3], 0.15, 1e-12) && near(gen.upper()[3], 0.325, 1e-12),
            "generator bounds for 010 differ from [0.15, 0.325]");
  v.require(near(gen.lower()[2], 0.15, 1e-12) && near(gen.upper()[2], 0.5, 1e-12),
            "generator bounds for 01 differ from [0.15, 0.5]");
  const auto before = gen.assignments();
  const Instantiation prev = gen.values();
  const auto second = gen.next_at(0.4567);
  v.require(second.s == testing::inst({0, 1, 1}), "0.4567 does not map to 011");
  v.require(gen.last_restart() == 3 && gen.assignments() - before == 1 && second.s[0] == prev[0] &&
                second.s[1] == prev[1],
            "restart between 010 and 011 reassigned more than c");
  const auto third = gen.next_at(0.6789);
  v.require(third.s == testing::inst({1, 1, 0}), "0.6789 does not map to 110");
  v.detail << "I(010), I_2(01), I_0, P(010); points 0.2345, 0.4567, 0.6789 with restart checks";
  return v;
}

// 2. Incremental bounds against the enumeration oracle.
Verdict oracle_equivalence() {
  Verdict v;
  Rng rng(2024);
  double worst = 0.0;
  std::size_t steps = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 3 + seed % 6;  // 3..8
    const std::size_t max_arity = seed % 2 ? 2 : 3;
    const Network net = testing::random_dag(seed, {.n = n, .min_arity = 2, .max_arity = max_arity});
    const Evidence ev = testing::random_evidence(net, rng, seed % 3);
    const Network work = absorb_evidence(net, ev);
    const Ordering ord = topological_order(work, seed % 4 == 0);
    for (ProposalChoice proposal : {ProposalChoice::Uniform, ProposalChoice::Conditional}) {
      StratifiedGenerator gen(work, ev, ord, proposal, 64, seed % 2 ? PointRule::Random : PointRule::Median);
      const Measure q = Measure::of(proposal);
      while (!gen.done()) {
        gen.next(rng);
        ++steps;
        for (std::size_t j = 0; j <= n; ++j) {
          const Interval want = prefix_interval_oracle(net, ev, ord, gen.values(), j, q);
          worst = std::max({worst, std::abs(gen.lower()[j] - want.lo), std::abs(gen.upper()[j] - want.hi)});
        }
      }
    }
  }
  v.require(worst <= 1e-9, "max bound error " + fmt("%.3g", worst) + " > 1e-9");
  v.detail << steps << " steps on 20 networks, max |bound - oracle| = " << fmt("%.3g", worst);
  return v;
}

// 3. Even m with the median point: the first variable's estimate is exactly 1/2.
Verdict even_m_exactness() {
  Verdict v;
  std::vector<Network> nets{testing::fixture3()};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    // Generated polytree with a uniform prior on the first-ordered root.
    const Network g = random_polytree_network({.n = 12, .seed = 900 + seed});
    const VarId first = topological_order(g, false)[0];
    std::vector<Variable> vars(g.variables().begin(), g.variables().end());
    std::vector<std::vector<VarId>> parents;
    std::vector<Cpt> cpts;
    for (VarId x = 0; x < g.size(); ++x) {
      parents.emplace_back(g.parents(x).begin(), g.parents(x).end());
      cpts.push_back(x == first ? Cpt(2, {}, {0.5, 0.5}) : g.cpt(x));
    }
    nets.emplace_back("uniform-root", std::move(vars), std::move(parents), std::move(cpts));
  }
  for (SchemeKind scheme : {SchemeKind::StratLikelihood, SchemeKind::StratSimple}) {
    std::size_t runs = 0, exact = 0;
    double worst = 0.0;
    for (const Network& net : nets) {
      const VarId first = topological_order(net, false)[0];
      for (std::size_t m = 2; m <= 1000; m += 2) {
        const auto r = run(net, {}, config(scheme, m, 1));
        ++runs;
        if (r.estimates[first][0] == 0.5) ++exact;
        worst = std::max(worst, std::abs(r.estimates[first][0] - 0.5));
      }
    }
    v.require(exact == runs, std::string(to_string(scheme)) + " not exact");
    v.detail << to_string(scheme) << " exact in " << exact << "/" << runs << " runs (max |P - 0.5| = "
             << fmt("%.3g", worst) << "); ";
  }
  return v;
}

// 4. Assignment count and comparisons against the bound.
Verdict assignment_bound_check() {
  Verdict v;
  std::size_t runs = 0, within_counted = 0;
  double tightest_likelihood = 0.0, tightest_simple = 0.0;
  for (const Network& net : suite50()) {
    const std::uint64_t n = net.size();
    for (std::uint64_t m : {100u, 1000u, 10000u}) {
      // Per-position count: position k changes at most min(2^k, m) times, and
      // a search over n bounds makes at most floor(log2 n) + 1 comparisons.
      const std::uint64_t floor_log_m = std::bit_width(m) - 1;
      const std::uint64_t counted =
          (std::uint64_t{2} << floor_log_m) - 2 + (n - floor_log_m) * m + m * std::bit_width(n);
      for (SchemeKind scheme : {SchemeKind::StratLikelihood, SchemeKind::StratSimple}) {
        for (PointRule rule : {PointRule::Median, PointRule::Random}) {
          RunConfig cfg = config(scheme, m, 3);
          cfg.point_rule = rule;
          const auto stats = run(net, {}, cfg).stats;
          ++runs;
          const std::uint64_t work = stats.assignments + stats.comparisons;
          const std::uint64_t bound = assignment_bound(n, m);
          double& tightest = scheme == SchemeKind::StratSimple ? tightest_simple : tightest_likelihood;
          tightest = std::max(tightest, static_cast<double>(work) / static_cast<double>(bound));
          if (work <= counted) ++within_counted;
          v.require(work <= bound, std::string(to_string(scheme)) + " m=" + std::to_string(m) + ": " +
                                       std::to_string(work) + " > " + std::to_string(bound));
          if (m > n) v.require(stats.assignments < n * m, "assignments not below n*m at m=" + std::to_string(m));
        }
      }
    }
  }
  v.detail << runs << " runs, max work/bound: strat-likelihood " << fmt("%.4f", tightest_likelihood)
           << ", strat-simple " << fmt("%.4f", tightest_simple) << "; " << within_counted << "/" << runs
           << " within the per-position count with (n - floor(log2 m)) * m trailing";
  return v;
}

// 5. Convergence at m = 200,000.
Verdict convergence() {
  Verdict v;
  double worst_prior = 0.0, worst_post = 0.0;
  for (std::size_t i = 0; i < suite10().size(); ++i) {
    const Network& net = suite10()[i];
    const auto exact = exact_marginals(net, {});
    for (SchemeKind scheme : kAllSchemes) {
      RunConfig cfg = config(scheme, 200000, 11 + i);
      if (scheme == SchemeKind::Pearl) cfg.burn_in = 1000;
      const double d = divergence(exact, run(net, {}, cfg).estimates);
      worst_prior = std::max(worst_prior, d);
      v.require(d < 5e-4, std::string(to_string(scheme)) + " on net " + std::to_string(i) + ": " + fmt("%.3g", d));
    }
    const Evidence ev = leaf_evidence(net);
    const auto post = exact_marginals(net, ev);
    for (SchemeKind scheme :
         {SchemeKind::Simple, SchemeKind::Likelihood, SchemeKind::StratSimple, SchemeKind::StratLikelihood}) {
      const double d = divergence(post, run(net, ev, config(scheme, 200000, 21 + i)).estimates, ev);
      worst_post = std::max(worst_post, d);
      v.require(d < 2e-3, std::string(to_string(scheme)) + " with evidence on net " + std::to_string(i) + ": " +
                              fmt("%.3g", d));
    }
  }
  v.detail << "worst divergence without evidence " << fmt("%.3g", worst_prior) << " (< 5e-4), with leaf evidence "
           << fmt("%.3g", worst_post) << " (< 2e-3)";
  return v;
}

double mean_divergence(SchemeKind scheme, std::size_t m, bool weighted, ScoringRule scoring,
                       std::uint64_t* lookups = nullptr) {
  double total = 0.0;
  std::size_t count = 0;
  for (const Network& net : suite50()) {
    const MarginalTable exact = polytree_prior_marginals(net);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RunConfig cfg = config(scheme, m, seed);
      cfg.weighted_ordering = weighted;
      cfg.scoring = scoring;
      const auto r = run(net, {}, cfg);
      if (lookups) *lookups += r.stats.cpt_lookups;
      total += divergence(exact, r.estimates);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

// 6. Ordering of the schemes on the 50-variable suite.
Verdict figure7_direction() {
  Verdict v;
  for (std::size_t m : {1000u, 10000u}) {
    const double simple = mean_divergence(SchemeKind::Simple, m, false, ScoringRule::Simple);
    const double lw = mean_divergence(SchemeKind::Likelihood, m, false, ScoringRule::Simple);
    const double strat = mean_divergence(SchemeKind::StratLikelihood, m, false, ScoringRule::Simple);
    const double weighted = mean_divergence(SchemeKind::StratLikelihood, m, true, ScoringRule::Simple);
    const std::string at = "m=" + std::to_string(m);
    v.require(strat < lw, at + ": strat-likelihood " + fmt("%.4g", strat) + " not below likelihood " + fmt("%.4g", lw));
    v.require(lw < simple, at + ": likelihood " + fmt("%.4g", lw) + " not below simple " + fmt("%.4g", simple));
    v.require(weighted <= 1.05 * strat,
              at + ": weighted ordering " + fmt("%.4g", weighted) + " > 1.05 x plain " + fmt("%.4g", strat));
    v.detail << at << " simple " << fmt("%.4g", simple) << ", likelihood " << fmt("%.4g", lw) << ", strat-likelihood "
             << fmt("%.4g", strat) << ", weighted " << fmt("%.4g", weighted) << "; ";
  }
  return v;
}

// 7. Blanket scoring leaves strat-likelihood-median accuracy within a factor 1.5.
Verdict scoring_neutrality() {
  Verdict v;
  std::uint64_t simple_lookups = 0, blanket_lookups = 0;
  const double simple = mean_divergence(SchemeKind::StratLikelihood, 1000, false, ScoringRule::Simple, &simple_lookups);
  const double blanket =
      mean_divergence(SchemeKind::StratLikelihood, 1000, false, ScoringRule::Blanket, &blanket_lookups);
  const double ratio = blanket / simple;
  v.require(ratio < 1.5 && ratio > 1.0 / 1.5, "divergence ratio blanket/simple = " + fmt("%.4g", ratio));
  v.require(blanket_lookups > simple_lookups, "blanket scoring did not add table lookups");
  v.detail << "simple " << fmt("%.4g", simple) << ", blanket " << fmt("%.4g", blanket) << ", ratio "
           << fmt("%.4g", ratio) << ", table lookups " << simple_lookups << " -> " << blanket_lookups;
  return v;
}

// 8. Dense, tree and pruned-tree lookups agree bit for bit.
Verdict representation_equivalence() {
  Verdict v;
  Rng rng(8);
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::size_t n = 4 + seed % 7;  // 4..10
    const Network net = testing::random_dag(seed, {.n = n, .min_arity = 2, .max_arity = n <= 7 ? 3u : 2u});
    const Evidence ev = testing::random_evidence(net, rng, 1 + seed % 3);
    const Network pruned = absorb_evidence(net, ev);
    for_each_instantiation(net, [&](const Instantiation& s) {
      if (!testing::consistent(s, ev)) return;
      for (VarId x = 0; x < n; ++x) {
        const auto dense = net.dense_row(x, s);
        const auto tree = net.tree_row(x, s);
        const auto cut = pruned.tree_row(x, s);
        ++compared;
        if (!std::equal(dense.begin(), dense.end(), tree.begin(), tree.end()) ||
            !std::equal(dense.begin(), dense.end(), cut.begin(), cut.end())) {
          v.require(false, "mismatch on network " + std::to_string(seed));
        }
      }
    });
  }
  v.detail << compared << " lookups compared on 50 networks";
  return v;
}

// 9. Weight conventions.
Verdict weight_sanity() {
  Verdict v;
  std::size_t unit = 0;
  for (const Network& net : suite10()) {
    for (SchemeKind scheme : {SchemeKind::Likelihood, SchemeKind::StratLikelihood}) {
      run(net, {}, config(scheme, 5000, 1), [&](const WeightedSample& ws) {
        if (ws.p != 1.0) v.require(false, std::string(to_string(scheme)) + " sample with p != 1");
        ++unit;
      });
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < suite10().size(); ++i) {
    const Network& net = suite10()[i];
    const Evidence ev = leaf_evidence(net);
    const auto post = exact_marginals(net, ev);
    for (SchemeKind scheme : kAllSchemes) {
      RunConfig cfg = config(scheme, 200000, 31 + i);
      if (scheme == SchemeKind::Pearl) cfg.burn_in = 1000;
      const double d = divergence(post, run(net, ev, cfg).estimates, ev);
      worst = std::max(worst, d);
      v.require(d < 2e-3, std::string(to_string(scheme)) + " posterior on net " + std::to_string(i) + ": " +
                              fmt("%.3g", d));
    }
  }
  v.detail << unit << " evidence-free samples all with p = 1; worst posterior divergence " << fmt("%.3g", worst)
           << " (< 2e-3)";
  return v;
}

// Informational: wall time of tree versus dense lookups.
void timing_report() {
  double tree_ms = 0.0, dense_ms = 0.0;
  for (const Network& net : suite50()) {
    for (int rep = 0; rep < 3; ++rep) {
      const RunConfig cfg = config(SchemeKind::StratLikelihood, 10000, 1);
      tree_ms += run(net, {}, cfg).stats.wall_ms;
      dense_ms += run(net.with_lookup(CptLookup::Dense), {}, cfg).stats.wall_ms;
    }
  }
  std::printf("info  lookup timing (strat-likelihood, m=10000, 10 nets x 3): tree %.1f ms, dense %.1f ms\n", tree_ms,
              dense_ms);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"1 worked example", worked_example},
      {"2 oracle equivalence", oracle_equivalence},
      {"3 even-m exactness", even_m_exactness},
      {"4 assignment bound", assignment_bound_check},
      {"5 convergence", convergence},
      {"6 scheme ordering", figure7_direction},
      {"7 scoring neutrality", scoring_neutrality},
      {"8 lookup equivalence", representation_equivalence},
      {"9 weight conventions", weight_sanity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string failures;
    for (const auto& f : v.failures) failures += (failures.empty() ? " | failed: " : "; ") + f;
    std::printf("%s  %s (%.1f s): %s%s\n", v.pass ? "PASS" : "FAIL", name.c_str(), secs, v.detail.str().c_str(),
                failures.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  timing_report();
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
