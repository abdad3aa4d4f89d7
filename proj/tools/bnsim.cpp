// bnsim: command-line front end for the belief-network samplers.
//
//   bnsim gen    --n 50 --count 10 --seed 7 --dir nets
//   bnsim exact  --net fixture3.net [--evidence ev.txt]
//   bnsim sample --net fixture3.net --scheme strat-likelihood --m 1000 --median
//   bnsim bench  --gen-n 50 --gen-count 10 --schemes likelihood,strat-likelihood --out results.csv

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bnstrat/bench.hpp"
#include "bnstrat/error.hpp"
#include "bnstrat/netgen.hpp"
#include "bnstrat/oracle.hpp"
#include "bnstrat/samplers.hpp"

namespace {

using namespace bnstrat;

const std::vector<std::string> kSchemes{"simple", "likelihood", "pearl", "strat-simple", "strat-likelihood"};

void print_marginals(std::ostream& out, const Network& net, const MarginalTable& table) {
  char buf[128];
  out << "variable value probability\n";
  for (VarId v = 0; v < net.size(); ++v) {
    for (std::size_t k = 0; k < table[v].size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s %zu %.10f\n", net.variable(v).name.c_str(), k, table[v][k]);
      out << buf;
    }
  }
}

struct CommonFlags {
  std::string evidence;
  std::string ordering = "plain";
  bool median = true;
  std::uint64_t seed = 1;
  std::size_t burn_in = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--evidence", evidence, "Evidence file (<name> <value-index> per line)");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--ordering", ordering, "Variable ordering")->check(CLI::IsMember({"plain", "weighted"}));
    cmd->add_flag("--median,!--random", median, "Stratum point: median (default) or random");
    cmd->add_option("--burn-in", burn_in, "Pearl sweeps discarded before scoring");
  }
};

int cmd_gen(std::size_t n, std::size_t count, std::size_t arity, std::uint64_t seed, const std::string& dir,
            const std::string& prefix) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < count; ++i) {
    GenConfig cfg{n, arity, seed + i};
    const std::string name = prefix + std::to_string(i);
    const Network net = random_polytree_network(cfg, name);
    const auto path = std::filesystem::path(dir) / (name + ".net");
    std::ofstream out(path);
    out << save_network(net);
    out.close();
    if (!out) throw Error("cannot write " + path.string());
    std::cout << path.string() << " variables=" << net.size() << " arcs=" << net.arc_count() << '\n';
  }
  return 0;
}

int cmd_exact(const std::string& net_path, const CommonFlags& flags, const std::string& out_path,
              std::size_t max_vars) {
  const Network net = load_network_file(net_path);
  const Evidence ev = flags.evidence.empty() ? Evidence{} : load_evidence_file(flags.evidence, net);
  const MarginalTable table = exact_marginals(net, ev, EnumerationLimits{max_vars});
  print_marginals(std::cout, net, table);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    print_marginals(out, net, table);
    if (!out) throw Error("cannot write " + out_path);
  }
  return 0;
}

int cmd_sample(const std::string& net_path, const CommonFlags& flags, const std::string& scheme,
               const std::string& scoring, std::size_t m, const std::string& lookup, const std::string& out_path) {
  Network net = load_network_file(net_path);
  if (lookup == "dense") net = net.with_lookup(CptLookup::Dense);
  const Evidence ev = flags.evidence.empty() ? Evidence{} : load_evidence_file(flags.evidence, net);
  RunConfig cfg;
  cfg.scheme = *parse_scheme(scheme);
  cfg.scoring = *parse_scoring(scoring);
  cfg.m = m;
  cfg.seed = flags.seed;
  cfg.weighted_ordering = flags.ordering == "weighted";
  cfg.point_rule = flags.median ? PointRule::Median : PointRule::Random;
  cfg.burn_in = flags.burn_in;
  const RunResult result = run(net, ev, cfg);

  print_marginals(std::cout, net, result.estimates);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    print_marginals(out, net, result.estimates);
    if (!out) throw Error("cannot write " + out_path);
  }
  const auto& s = result.stats;
  std::cout << "samples " << s.samples << '\n'
            << "assignments " << s.assignments << '\n'
            << "comparisons " << s.comparisons << '\n'
            << "cpt_lookups " << s.cpt_lookups << '\n'
            << "blanket_evaluations " << s.blanket_evaluations << '\n'
            << "blanket_reused " << (s.blanket_reused ? "yes" : "no") << '\n'
            << "time_ms " << s.wall_ms << '\n';
  try {
    if (auto ref = reference_marginals(net, ev)) {
      std::cout << "divergence " << divergence(*ref, result.estimates, ev) << '\n';
    } else {
      std::cout << "divergence NA\n";
    }
  } catch (const ZeroProbabilityEvidence&) {
    std::cout << "divergence NA\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic simulation for discrete belief networks"};
  app.require_subcommand(1);

  // gen
  std::size_t gen_n = 50, gen_count = 1, gen_arity = 2;
  std::uint64_t gen_seed = 1;
  std::string gen_dir = ".", gen_prefix = "net";
  auto* gen = app.add_subcommand("gen", "Generate random polytree networks");
  gen->add_option("--n", gen_n, "Variables per network")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  gen->add_option("--count", gen_count, "Number of networks");
  gen->add_option("--arity", gen_arity, "Values per variable")->check(CLI::Range(2, 64));
  gen->add_option("--seed", gen_seed, "Seed of the first network; network i uses seed + i");
  gen->add_option("--dir", gen_dir, "Output directory");
  gen->add_option("--prefix", gen_prefix, "File name prefix");

  // exact
  std::string net_path, out_path;
  std::size_t max_vars = EnumerationLimits{}.max_variables;
  CommonFlags exact_flags;
  auto* exact = app.add_subcommand("exact", "Exact posterior marginals by enumeration");
  exact->add_option("--net", net_path, "Network file")->required();
  exact->add_option("--out", out_path, "Also write the table to this file");
  exact->add_option("--max-vars", max_vars, "Enumeration guard");
  exact_flags.attach(exact);

  // sample
  std::string scheme = "strat-likelihood", scoring = "simple", lookup = "tree";
  std::size_t m = 1000;
  CommonFlags sample_flags;
  auto* sample = app.add_subcommand("sample", "Estimate marginals with one scheme");
  sample->add_option("--net", net_path, "Network file")->required();
  sample->add_option("--scheme", scheme, "Sampling scheme")->check(CLI::IsMember(kSchemes));
  sample->add_option("--scoring", scoring, "Scoring rule")->check(CLI::IsMember({"simple", "blanket"}));
  sample->add_option("--m", m, "Number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--lookup", lookup, "Table representation")->check(CLI::IsMember({"tree", "dense"}));
  sample->add_option("--out", out_path, "Also write the estimates to this file");
  sample_flags.attach(sample);

  // bench
  std::vector<std::string> bench_nets, bench_schemes = kSchemes, bench_scorings{"simple"};
  std::vector<std::size_t> bench_ms;
  std::vector<std::uint64_t> bench_seeds{1};
  std::size_t bench_gen_n = 0, bench_gen_count = 10, jobs = 1;
  std::uint64_t bench_gen_seed = 1;
  std::string bench_out;
  CommonFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Sweep schemes and sample counts, emit CSV");
  bench->add_option("--net", bench_nets, "Network files")->check(CLI::ExistingFile);
  bench->add_option("--gen-n", bench_gen_n, "Generate polytrees with this many variables instead");
  bench->add_option("--gen-count", bench_gen_count, "Number of generated networks");
  bench->add_option("--gen-seed", bench_gen_seed, "Seed of the first generated network");
  bench->add_option("--schemes", bench_schemes, "Comma-separated schemes")
      ->delimiter(',')
      ->check(CLI::IsMember(kSchemes));
  bench->add_option("--scorings", bench_scorings, "Comma-separated scoring rules")
      ->delimiter(',')
      ->check(CLI::IsMember({"simple", "blanket"}));
  bench->add_option("--ms", bench_ms, "Comma-separated sample counts (default 100..1000 by 100, 2000..10000 by 1000)")
      ->delimiter(',');
  bench->add_option("--seeds", bench_seeds, "Comma-separated run seeds")->delimiter(',');
  bench->add_option("--jobs", jobs, "Worker threads; above 1 the time column is NA")->check(CLI::PositiveNumber);
  bench->add_option("--max-vars", max_vars, "Enumeration guard for the divergence reference");
  bench->add_option("--out", bench_out, "Append rows to this CSV file (stdout otherwise)");
  bench_flags.attach(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_n, gen_count, gen_arity, gen_seed, gen_dir, gen_prefix);
    if (*exact) return cmd_exact(net_path, exact_flags, out_path, max_vars);
    if (*sample) return cmd_sample(net_path, sample_flags, scheme, scoring, m, lookup, out_path);

    ExperimentConfig cfg;
    for (const auto& path : bench_nets) {
      cfg.networks.push_back({std::filesystem::path(path).stem().string(), load_network_file(path)});
    }
    for (std::size_t i = 0; bench_gen_n > 0 && i < bench_gen_count; ++i) {
      GenConfig g{bench_gen_n, 2, bench_gen_seed + i};
      const std::string id = "gen" + std::to_string(i);
      cfg.networks.push_back({id, random_polytree_network(g, id)});
    }
    if (cfg.networks.empty()) {
      std::cerr << "bench: give --net files or --gen-n\n";
      return 2;
    }
    if (bench_schemes.empty()) {
      std::cerr << "bench: scheme list is empty\n";
      return 2;
    }
    if (!bench_flags.evidence.empty()) {
      std::ifstream in(bench_flags.evidence);
      if (!in) throw Error("cannot open " + bench_flags.evidence);
      cfg.evidence_text = std::string(std::istreambuf_iterator<char>(in), {});
    }
    cfg.schemes.clear();
    for (const auto& s : bench_schemes) cfg.schemes.push_back(*parse_scheme(s));
    cfg.scorings.clear();
    for (const auto& s : bench_scorings) cfg.scorings.push_back(*parse_scoring(s));
    if (!bench_ms.empty()) cfg.sample_counts = bench_ms;
    cfg.seeds = bench_seeds;
    cfg.point_rule = bench_flags.median ? PointRule::Median : PointRule::Random;
    cfg.weighted_ordering = bench_flags.ordering == "weighted";
    cfg.burn_in = bench_flags.burn_in;
    cfg.jobs = jobs;
    cfg.limits.max_variables = max_vars;
    try {
      cfg.validate();
    } catch (const Error& e) {
      std::cerr << "bench: " << e.what() << '\n';
      return 2;
    }

    if (bench_out.empty()) {
      std::cout << csv_header() << '\n';
      run_experiment(cfg, &std::cout);
    } else {
      const bool fresh = !std::filesystem::exists(bench_out) || std::filesystem::file_size(bench_out) == 0;
      std::ofstream out(bench_out, std::ios::app);
      if (!out) throw Error("cannot write " + bench_out);
      if (fresh) out << csv_header() << '\n';
      run_experiment(cfg, &out);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
