#include "bnstrat/bench.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "bnstrat/error.hpp"

namespace bnstrat {

std::vector<std::size_t> default_sample_counts() {
  std::vector<std::size_t> out;
  for (std::size_t m = 100; m <= 1000; m += 100) out.push_back(m);
  for (std::size_t m = 2000; m <= 10000; m += 1000) out.push_back(m);
  return out;
}

void ExperimentConfig::validate() const {
  if (networks.empty()) throw Error("no networks given");
  if (schemes.empty()) throw Error("no schemes given");
  if (scorings.empty()) throw Error("no scoring rules given");
  if (sample_counts.empty()) throw Error("no sample counts given");
  if (seeds.empty()) throw Error("no seeds given");
  if (jobs == 0) throw Error("need at least one worker");
  for (std::size_t i = 0; i < sample_counts.size(); ++i) {
    if (sample_counts[i] == 0) throw Error("sample counts must be positive");
    if (i > 0 && sample_counts[i] <= sample_counts[i - 1]) {
      throw Error("sample counts must be strictly increasing");
    }
  }
}

namespace {

std::string shortest(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + '"';
}

}  // namespace

std::string csv_header() {
  return "network,scheme,scoring,m,seed,divergence,time_ms,assignments,comparisons,error";
}

std::string to_csv_line(const ResultRow& row) {
  std::string line = csv_field(row.network);
  line += ',';
  line += to_string(row.scheme);
  line += ',';
  line += to_string(row.scoring);
  line += ',' + std::to_string(row.m) + ',' + std::to_string(row.seed) + ',';
  line += row.divergence ? shortest(*row.divergence) : "NA";
  line += ',';
  if (row.time_ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *row.time_ms);
    line += buf;
  } else {
    line += "NA";
  }
  line += ',' + std::to_string(row.assignments) + ',' + std::to_string(row.comparisons) + ',';
  line += csv_field(row.error);
  return line;
}

std::optional<MarginalTable> reference_marginals(const Network& net, const Evidence& ev,
                                                 EnumerationLimits limits) {
  if (net.size() <= limits.max_variables) return exact_marginals(net, ev, limits);
  if (ev.empty() && is_polytree(net)) return polytree_prior_marginals(net);
  return std::nullopt;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::ostream* csv) {
  cfg.validate();

  // Per-network evidence and reference, or the error every row will carry.
  struct Prepared {
    Evidence ev;
    std::optional<MarginalTable> reference;
    std::string error;
  };
  std::vector<Prepared> prepared(cfg.networks.size());
  for (std::size_t i = 0; i < cfg.networks.size(); ++i) {
    const Network& net = cfg.networks[i].net;
    try {
      if (cfg.evidence_text) prepared[i].ev = load_evidence(*cfg.evidence_text, net);
      prepared[i].reference = reference_marginals(net, prepared[i].ev, cfg.limits);
    } catch (const std::exception& e) {
      prepared[i].error = e.what();
    }
  }

  std::vector<ResultRow> rows;
  for (std::size_t i = 0; i < cfg.networks.size(); ++i)
    for (SchemeKind scheme : cfg.schemes)
      for (ScoringRule scoring : cfg.scorings)
        for (std::size_t m : cfg.sample_counts)
          for (std::uint64_t seed : cfg.seeds) {
            ResultRow row;
            row.network = cfg.networks[i].id;
            row.scheme = scheme;
            row.scoring = scoring;
            row.m = m;
            row.seed = seed;
            rows.push_back(std::move(row));
          }
  const std::size_t cells_per_network = rows.size() / cfg.networks.size();

  std::mutex out_mutex;
  auto run_cell = [&](std::size_t c) {
    ResultRow& row = rows[c];
    const std::size_t i = c / cells_per_network;
    const Prepared& prep = prepared[i];
    if (prep.error.empty()) {
      RunConfig rc;
      rc.scheme = row.scheme;
      rc.scoring = row.scoring;
      rc.m = row.m;
      rc.seed = row.seed;
      rc.point_rule = cfg.point_rule;
      rc.weighted_ordering = cfg.weighted_ordering;
      rc.burn_in = cfg.burn_in;
      try {
        const RunResult result = run(cfg.networks[i].net, prep.ev, rc);
        if (prep.reference) row.divergence = divergence(*prep.reference, result.estimates, prep.ev);
        if (cfg.jobs == 1) row.time_ms = result.stats.wall_ms;
        row.assignments = result.stats.assignments;
        row.comparisons = result.stats.comparisons;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    } else {
      row.error = prep.error;
    }
    if (csv) {
      std::lock_guard lock(out_mutex);
      *csv << to_csv_line(row) << '\n';
      csv->flush();
    }
  };

  if (cfg.jobs == 1) {
    for (std::size_t c = 0; c < rows.size(); ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < cfg.jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t c; (c = next.fetch_add(1)) < rows.size();) run_cell(c);
      });
    }
    for (auto& t : workers) t.join();
  }
  return rows;
}

}  // namespace bnstrat
