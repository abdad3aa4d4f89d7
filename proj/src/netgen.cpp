#include "bnstrat/netgen.hpp"

#include <algorithm>
#include <cmath>

#include "bnstrat/error.hpp"
#include "bnstrat/rng.hpp"

namespace bnstrat {

std::size_t Structure::arc_count() const {
  std::size_t arcs = 0;
  for (const auto& p : parents) arcs += p.size();
  return arcs;
}

Structure random_polytree(const GenConfig& cfg) {
  if (cfg.n == 0) throw Error("a network needs at least one variable");
  if (cfg.arity < 2) throw Error("arity must be at least 2");
  Structure out;
  for (VarId v = 0; v < cfg.n; ++v) out.variables.push_back(Variable{v, "x" + std::to_string(v), cfg.arity});
  out.parents.resize(cfg.n);
  if (cfg.n == 1) return out;

  Rng rng(cfg.seed);
  auto add_arc = [&](VarId a, VarId b) {
    const VarId lo = std::min(a, b), hi = std::max(a, b);
    out.parents[hi].push_back(lo);
  };

  // pool[0, placed) holds the touched variables, the rest are untouched.
  std::vector<VarId> pool(cfg.n);
  for (VarId v = 0; v < cfg.n; ++v) pool[v] = v;
  auto take = [&](std::size_t placed) {
    const std::size_t pick = placed + rng.below(cfg.n - placed);
    std::swap(pool[placed], pool[pick]);
    return pool[placed];
  };

  const VarId a = take(0);
  const VarId b = take(1);
  add_arc(a, b);
  for (std::size_t placed = 2; placed < cfg.n; ++placed) {
    const VarId inside = pool[rng.below(placed)];
    const VarId outside = take(placed);
    add_arc(inside, outside);
  }
  for (auto& p : out.parents) std::sort(p.begin(), p.end());
  return out;
}

Network random_cpts(const Structure& structure, const GenConfig& cfg, std::string name) {
  // Separate stream from the structure draw made with the same seed.
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Cpt> cpts;
  for (VarId v = 0; v < structure.variables.size(); ++v) {
    const std::size_t arity = structure.variables[v].arity;
    std::vector<std::size_t> parent_arities;
    std::size_t rows = 1;
    for (VarId p : structure.parents[v]) {
      parent_arities.push_back(structure.variables[p].arity);
      rows *= structure.variables[p].arity;
    }
    std::vector<double> entries;
    entries.reserve(rows * arity);
    std::vector<double> row(arity);
    for (std::size_t r = 0; r < rows; ++r) {
      if (arity == 2) {
        const double u = rng.uniform_open();
        row[0] = u;
        row[1] = 1.0 - u;
      } else {
        // Normalized unit exponentials are uniform on the simplex.
        double sum = 0.0;
        for (double& x : row) sum += x = -std::log(rng.uniform_open());
        for (double& x : row) x /= sum;
      }
      double sum = 0.0;
      for (double& x : row) sum += x = std::max(x, kCptFloor);
      for (double& x : row) x /= sum;
      entries.insert(entries.end(), row.begin(), row.end());
    }
    cpts.emplace_back(arity, std::move(parent_arities), std::move(entries));
  }
  return Network(std::move(name), structure.variables, structure.parents, std::move(cpts));
}

Network random_polytree_network(const GenConfig& cfg, std::string name) {
  return random_cpts(random_polytree(cfg), cfg, std::move(name));
}

}  // namespace bnstrat
