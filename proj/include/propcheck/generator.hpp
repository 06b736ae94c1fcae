#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "propcheck/domain.hpp"
#include "propcheck/rng.hpp"

namespace propcheck {

/// Parameters of random instance generation and campaign length.
struct GenConfig {
  std::size_t n_vars = 5;
  Value value_min = 0;
  Value value_max = 6;
  double density = 0.5;
  std::size_t n_tests = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_vars < 1) throw ContractError("GenConfig: nVars must be at least 1");
    if (value_min > value_max) throw ContractError("GenConfig: valueMin must not exceed valueMax");
    if (!(density > 0.0 && density <= 1.0)) throw ContractError("GenConfig: density must lie in (0, 1]");
    if (n_tests < 1) throw ContractError("GenConfig: nTests must be at least 1");
  }
};

/// One draw per candidate value, variable-major then value-ascending; a value
/// enters the domain when its draw falls below `density`. An empty domain gets
/// one value forced, drawn uniformly from the range.
[[nodiscard]] inline Instance generate_instance(Rng& rng, const GenConfig& cfg) {
  cfg.validate();
  const auto width = static_cast<std::uint64_t>(std::int64_t{cfg.value_max} - cfg.value_min + 1);
  std::vector<Domain> domains;
  domains.reserve(cfg.n_vars);
  for (std::size_t i = 0; i < cfg.n_vars; ++i) {
    std::vector<Value> values;
    for (std::int64_t v = cfg.value_min; v <= cfg.value_max; ++v) {
      if (rng.unit() < cfg.density) values.push_back(static_cast<Value>(v));
    }
    if (values.empty()) {
      values.push_back(static_cast<Value>(cfg.value_min + static_cast<std::int64_t>(rng.below(width))));
    }
    domains.emplace_back(std::move(values));
  }
  return Instance(std::move(domains));
}

inline constexpr std::size_t kDefaultShrinkBudget = 10'000;

struct ShrinkResult {
  Instance instance;
  /// False when the evaluation budget ran out before 1-minimality was reached.
  bool minimal = true;
  std::size_t evaluations = 0;
};

/// Greedy single-value removal until no removal keeps `fails` true.
///
/// Variables are scanned by descending domain size (lower index first on
/// ties); within a domain the largest values are tried first, so the smallest
/// values survive. Removals never empty a domain. Every accepted removal
/// restarts the scan.
[[nodiscard]] inline ShrinkResult shrink(const Instance& failing, const std::function<bool(const Instance&)>& fails,
                                         std::size_t budget = kDefaultShrinkBudget) {
  ShrinkResult result{failing, true, 0};
  bool progress = true;
  while (progress) {
    progress = false;
    const Instance& current = result.instance;
    std::vector<std::size_t> order(current.arity());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return current[a].size() > current[b].size(); });
    for (std::size_t var : order) {
      if (current[var].size() < 2) continue;
      const auto values = current[var].values();
      for (auto it = values.rbegin(); it != values.rend(); ++it) {
        if (result.evaluations >= budget) {
          result.minimal = false;
          return result;
        }
        Instance candidate = current.with_domain(var, current[var].without(*it));
        ++result.evaluations;
        if (fails(candidate)) {
          result.instance = std::move(candidate);
          progress = true;
          break;
        }
      }
      if (progress) break;
    }
  }
  return result;
}

/// True iff no single-value removal from `inst` keeps `fails` true.
[[nodiscard]] inline bool is_one_minimal(const Instance& inst, const std::function<bool(const Instance&)>& fails) {
  for (std::size_t i = 0; i < inst.arity(); ++i) {
    if (inst[i].size() < 2) continue;
    for (Value v : inst[i]) {
      if (fails(inst.with_domain(i, inst[i].without(v)))) return false;
    }
  }
  return true;
}

}  // namespace propcheck
