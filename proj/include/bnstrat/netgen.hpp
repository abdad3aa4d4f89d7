#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bnstrat/model.hpp"

namespace bnstrat {

struct GenConfig {
  std::size_t n = 50;
  std::size_t arity = 2;
  std::uint64_t seed = 0;
};

/// Network structure without tables.
struct Structure {
  std::vector<Variable> variables;
  std::vector<std::vector<VarId>> parents;

  std::size_t arc_count() const;
};

/// Every table entry is at least this before renormalization.
inline constexpr double kCptFloor = 1e-3;

/// Random polytree over variables x0..x{n-1}. The first arc joins two random
/// variables; every further arc joins a random variable already touched by
/// an arc to a random untouched one, until n - 1 arcs are placed. Arcs always
/// point from the lower to the higher index.
Structure random_polytree(const GenConfig& cfg);

/// Fills `structure` with random tables: each row uniform on the probability
/// simplex, entries floored at kCptFloor and renormalized.
Network random_cpts(const Structure& structure, const GenConfig& cfg, std::string name = "polytree");

/// random_cpts(random_polytree(cfg), cfg).
Network random_polytree_network(const GenConfig& cfg, std::string name = "polytree");

}  // namespace bnstrat
