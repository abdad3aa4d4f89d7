#include "bnstrat/samplers.hpp"

#include <chrono>

#include "bnstrat/error.hpp"

namespace bnstrat {

std::string_view to_string(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::Simple: return "simple";
    case SchemeKind::Likelihood: return "likelihood";
    case SchemeKind::Pearl: return "pearl";
    case SchemeKind::StratSimple: return "strat-simple";
    case SchemeKind::StratLikelihood: return "strat-likelihood";
  }
  return "?";
}

std::string_view to_string(ScoringRule scoring) {
  return scoring == ScoringRule::Simple ? "simple" : "blanket";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
  for (auto s : {SchemeKind::Simple, SchemeKind::Likelihood, SchemeKind::Pearl, SchemeKind::StratSimple,
                 SchemeKind::StratLikelihood})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

std::optional<ScoringRule> parse_scoring(std::string_view name) {
  if (name == "simple") return ScoringRule::Simple;
  if (name == "blanket") return ScoringRule::Blanket;
  return std::nullopt;
}

namespace {

Value draw_from(std::span<const double> row, Rng& rng) {
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (row[k] <= 0.0) continue;
    cum += row[k];
    last_positive = k;
    if (u < cum) return static_cast<Value>(k);
  }
  return static_cast<Value>(last_positive);
}

// Sampling loops work on a dense evidence vector (-1 = free) and reuse
// their buffers across samples.
struct Draws {
  const Network& net;
  std::vector<Value> clamp;
  std::uint64_t lookups = 0;
  std::uint64_t assignments = 0;

  Draws(const Network& n, const Evidence& ev) : net(n), clamp(ev.dense(n.size())) {}

  void simple(Instantiation& s, double& p, Rng& rng) {
    for (VarId v = 0; v < net.size(); ++v) {
      if (clamp[v] >= 0) {
        s[v] = clamp[v];
      } else {
        s[v] = static_cast<Value>(rng.below(net.arity(v)));
        ++assignments;
      }
    }
    p = joint_probability(net, s);
    lookups += net.size();
  }

  void likelihood(const Ordering& ord, Instantiation& s, double& p, Rng& rng) {
    p = 1.0;
    for (VarId v : ord) {
      const auto row = net.row(v, s);
      ++lookups;
      if (clamp[v] >= 0) {
        s[v] = clamp[v];
        p *= row[static_cast<std::size_t>(clamp[v])];
      } else {
        s[v] = draw_from(row, rng);
        ++assignments;
      }
    }
  }

  // Resamples every free variable in place; the conditional each variable
  // was drawn from is left in `cond[v]`.
  void sweep(const Ordering& ord, Instantiation& s, std::vector<std::vector<double>>& cond, Rng& rng) {
    for (VarId v : ord) {
      if (clamp[v] >= 0) continue;
      lookups += blanket_conditional_into(net, s, v, cond[v]);
      s[v] = draw_from(cond[v], rng);
      ++assignments;
    }
  }
};

}  // namespace

WeightedSample simple_draw(const Network& net, const Evidence& ev, Rng& rng) {
  Draws draws(net, ev);
  WeightedSample ws{Instantiation(net.size(), 0), 1.0};
  draws.simple(ws.s, ws.p, rng);
  return ws;
}

WeightedSample lw_draw(const Network& net, const Evidence& ev, const Ordering& ord, Rng& rng) {
  Draws draws(net, ev);
  WeightedSample ws{Instantiation(net.size(), 0), 1.0};
  draws.likelihood(ord, ws.s, ws.p, rng);
  return ws;
}

WeightedSample pearl_step(const Network& net, const Evidence& ev, const Ordering& ord,
                          const Instantiation& prev, Rng& rng) {
  Draws draws(net, ev);
  std::vector<std::vector<double>> cond(net.size());
  for (VarId v = 0; v < net.size(); ++v) cond[v].resize(net.arity(v));
  WeightedSample ws{prev, 1.0};
  draws.sweep(ord, ws.s, cond, rng);
  return ws;
}

RunResult run(const Network& net, const Evidence& ev, const RunConfig& cfg, const SampleObserver& observer) {
  if (cfg.m == 0) throw Error("sample count must be at least 1");
  ev.validate(net);
  const auto start = std::chrono::steady_clock::now();

  const Network work = absorb_evidence(net, ev);
  const Ordering ord = topological_order(work, cfg.weighted_ordering);
  const std::size_t n = work.size();
  Draws draws(work, ev);
  BeliefScores scores(work);
  Rng rng(cfg.seed);
  RunStats stats;

  std::size_t free_vars = 0;
  for (VarId v = 0; v < n; ++v)
    if (draws.clamp[v] < 0) ++free_vars;

  auto score = [&](const WeightedSample& ws) {
    if (observer) observer(ws);
    ++stats.samples;
    if (cfg.scoring == ScoringRule::Simple) {
      simple_update(scores, ws);
    } else {
      stats.cpt_lookups += blanket_update(scores, work, ev, ws);
      stats.blanket_evaluations += free_vars;
    }
  };

  WeightedSample ws{Instantiation(n, 0), 1.0};
  switch (cfg.scheme) {
    case SchemeKind::Simple:
      for (std::size_t i = 0; i < cfg.m; ++i) {
        draws.simple(ws.s, ws.p, rng);
        score(ws);
      }
      break;
    case SchemeKind::Likelihood:
      for (std::size_t i = 0; i < cfg.m; ++i) {
        draws.likelihood(ord, ws.s, ws.p, rng);
        score(ws);
      }
      break;
    case SchemeKind::Pearl: {
      std::vector<std::vector<double>> cond(n);
      for (VarId v = 0; v < n; ++v) cond[v].resize(work.arity(v));
      double p0;
      draws.likelihood(ord, ws.s, p0, rng);
      for (std::size_t i = 0; i < cfg.burn_in; ++i) draws.sweep(ord, ws.s, cond, rng);
      ws.p = 1.0;
      for (std::size_t i = 0; i < cfg.m; ++i) {
        draws.sweep(ord, ws.s, cond, rng);
        if (cfg.scoring == ScoringRule::Simple) {
          score(ws);
          continue;
        }
        // Each variable is credited with the conditional it was just drawn from.
        if (observer) observer(ws);
        ++stats.samples;
        for (VarId v = 0; v < n; ++v) {
          auto row = scores.row(v);
          if (draws.clamp[v] >= 0) {
            row[static_cast<std::size_t>(ws.s[v])] += ws.p;
          } else {
            for (std::size_t k = 0; k < row.size(); ++k) row[k] += ws.p * cond[v][k];
          }
        }
        scores.add_weight(ws.p);
      }
      stats.blanket_reused = cfg.scoring == ScoringRule::Blanket;
      break;
    }
    case SchemeKind::StratSimple:
    case SchemeKind::StratLikelihood: {
      const auto proposal =
          cfg.scheme == SchemeKind::StratSimple ? ProposalChoice::Uniform : ProposalChoice::Conditional;
      StratifiedGenerator gen(work, ev, ord, proposal, cfg.m, cfg.point_rule);
      while (!gen.done()) score(gen.next(rng));
      stats.assignments = gen.assignments();
      stats.comparisons = gen.comparisons();
      stats.cpt_lookups += gen.lookups();
      break;
    }
  }
  if (cfg.scheme != SchemeKind::StratSimple && cfg.scheme != SchemeKind::StratLikelihood) {
    stats.assignments = draws.assignments;
    stats.cpt_lookups += draws.lookups;
  }

  if (!(scores.total_weight() > 0.0)) {
    throw ZeroScores("all " + std::to_string(cfg.m) + " samples had zero weight");
  }
  RunResult result{normalize(scores), stats};
  for (auto [var, value] : ev) {
    auto& row = result.estimates[var];
    std::fill(row.begin(), row.end(), 0.0);
    row[static_cast<std::size_t>(value)] = 1.0;
  }
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace bnstrat
