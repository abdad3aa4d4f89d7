#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnstrat/model.hpp"
#include "bnstrat/oracle.hpp"
#include "bnstrat/samplers.hpp"

namespace bnstrat {

struct NetworkEntry {
  std::string id;
  Network net;
};

/// 100, 200, ..., 1000, 2000, ..., 10000.
std::vector<std::size_t> default_sample_counts();

/// One sweep: every network x scheme x scoring rule x sample count x seed.
struct ExperimentConfig {
  std::vector<NetworkEntry> networks;
  /// Evidence file text, resolved against each network by variable name.
  std::optional<std::string> evidence_text;
  std::vector<SchemeKind> schemes;
  std::vector<ScoringRule> scorings{ScoringRule::Simple};
  std::vector<std::size_t> sample_counts = default_sample_counts();
  std::vector<std::uint64_t> seeds{1};
  PointRule point_rule = PointRule::Median;
  bool weighted_ordering = false;
  std::size_t burn_in = 0;
  /// Worker threads. Above 1 the time column is reported as NA.
  std::size_t jobs = 1;
  EnumerationLimits limits;

  /// Throws Error on an empty list or non-increasing sample counts.
  void validate() const;
};

struct ResultRow {
  std::string network;
  SchemeKind scheme = SchemeKind::StratLikelihood;
  ScoringRule scoring = ScoringRule::Simple;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::optional<double> divergence;
  std::optional<double> time_ms;
  std::uint64_t assignments = 0;
  std::uint64_t comparisons = 0;
  std::string error;
};

/// `network,scheme,scoring,m,seed,divergence,time_ms,assignments,comparisons,error`
std::string csv_header();
std::string to_csv_line(const ResultRow& row);

/// Exact marginals to score estimates against: enumeration when the network
/// is within `limits`, forward propagation for an evidence-free polytree,
/// otherwise nothing.
std::optional<MarginalTable> reference_marginals(const Network& net, const Evidence& ev,
                                                 EnumerationLimits limits = {});

/// Runs every cell, writing one CSV line to `csv` (if given) as each cell
/// completes. A failing cell yields a row with the error column set and the
/// sweep continues. Rows are returned in cell order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::ostream* csv = nullptr);

}  // namespace bnstrat
