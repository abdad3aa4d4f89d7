#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "bnstrat/model.hpp"
#include "bnstrat/oracle.hpp"
#include "bnstrat/rng.hpp"
#include "bnstrat/scoring.hpp"
#include "bnstrat/stratified.hpp"

namespace bnstrat {

enum class SchemeKind { Simple, Likelihood, Pearl, StratSimple, StratLikelihood };
enum class ScoringRule { Simple, Blanket };

std::string_view to_string(SchemeKind scheme);
std::string_view to_string(ScoringRule scoring);
std::optional<SchemeKind> parse_scheme(std::string_view name);
std::optional<ScoringRule> parse_scoring(std::string_view name);

struct RunConfig {
  SchemeKind scheme = SchemeKind::StratLikelihood;
  std::size_t m = 1000;
  ScoringRule scoring = ScoringRule::Simple;
  /// Place high ordering_weight variables first among the eligible ones.
  bool weighted_ordering = false;
  PointRule point_rule = PointRule::Median;
  std::uint64_t seed = 1;
  /// Pearl only: sweeps discarded before scoring starts.
  std::size_t burn_in = 0;
};

struct RunStats {
  std::uint64_t samples = 0;
  /// Unobserved variables assigned a value, including Pearl's burn-in.
  std::uint64_t assignments = 0;
  /// Restart-search comparisons (stratified schemes only).
  std::uint64_t comparisons = 0;
  /// Table rows read while generating, weighting and scoring samples.
  std::uint64_t cpt_lookups = 0;
  /// Markov-blanket conditionals computed for scoring.
  std::uint64_t blanket_evaluations = 0;
  /// Pearl with blanket scoring scores with the conditionals its sweep
  /// already computed.
  bool blanket_reused = false;
  double wall_ms = 0.0;
};

struct RunResult {
  MarginalTable estimates;
  RunStats stats;
};

/// Called with every scored sample.
using SampleObserver = std::function<void(const WeightedSample&)>;

/// Runs one scheme end to end: absorbs the evidence, orders the variables,
/// generates cfg.m weighted samples, scores and normalizes them. Observed
/// variables come back as point masses. Deterministic for a fixed seed.
/// Throws ZeroScores when every sample had weight zero.
RunResult run(const Network& net, const Evidence& ev, const RunConfig& cfg, const SampleObserver& observer = {});

/// Unobserved variables uniform, observed ones clamped; p = P(s).
WeightedSample simple_draw(const Network& net, const Evidence& ev, Rng& rng);

/// Forward sampling along `ord` with observed variables clamped;
/// p = product over observed variables of P(e | parents in s).
WeightedSample lw_draw(const Network& net, const Evidence& ev, const Ordering& ord, Rng& rng);

/// One Gibbs sweep: every unobserved variable, in `ord` order, is redrawn
/// from its Markov-blanket conditional given the current values. p = 1.
/// Throws DegenerateBlanket on an all-zero conditional.
WeightedSample pearl_step(const Network& net, const Evidence& ev, const Ordering& ord,
                          const Instantiation& prev, Rng& rng);

}  // namespace bnstrat
