#pragma once

// Trusted reference filters derived from a feasibility checker.
//
// Every filter here works by explicit enumeration of candidate assignments,
// guarded by an EnumerationCap. They are oracles for small instances.
//
//   arc     every value has a support in the other variables' domains
//   boundZ  min/max of every domain have a support in the other variables'
//           integer intervals [min, max]; interior values are kept
//   boundD  min/max of every domain have a support in the other variables'
//           actual domains; interior values are kept
//   range   every value has a support in the other variables' intervals
//
// The bound and range variants iterate to the greatest fixpoint.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <limits>
#include <utility>
#include <vector>

#include "propcheck/domain.hpp"
#include "propcheck/filter.hpp"

namespace propcheck {

/// Semantics of a constraint as a predicate over complete assignments.
class Checker {
public:
  using Predicate = std::function<bool(std::span<const Value>)>;

  Checker(std::size_t arity, Predicate predicate, std::string name = "checker")
      : arity_(arity), predicate_(std::move(predicate)), name_(std::move(name)) {
    if (arity_ == 0) throw ContractError("checker arity must be at least 1");
    if (!predicate_) throw ContractError("checker predicate is empty");
  }

  [[nodiscard]] std::size_t arity() const noexcept { return arity_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] bool operator()(std::span<const Value> assignment) const { return predicate_(assignment); }

private:
  std::size_t arity_;
  Predicate predicate_;
  std::string name_;
};

/// True iff all values are pairwise distinct.
[[nodiscard]] inline Checker all_different_checker(std::size_t arity) {
  return Checker(
      arity,
      [](std::span<const Value> x) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (x[i] == x[j]) return false;
          }
        }
        return true;
      },
      "alldiff");
}

/// True iff the values sum to `target`.
[[nodiscard]] inline Checker sum_checker(std::size_t arity, std::int64_t target) {
  return Checker(
      arity,
      [target](std::span<const Value> x) {
        return std::accumulate(x.begin(), x.end(), std::int64_t{0}) == target;
      },
      "sum=" + std::to_string(target));
}

enum class ConsistencyLevel { Arc, BoundZ, BoundD, Range };

[[nodiscard]] constexpr std::string_view to_string(ConsistencyLevel level) noexcept {
  switch (level) {
    case ConsistencyLevel::Arc: return "arc";
    case ConsistencyLevel::BoundZ: return "boundz";
    case ConsistencyLevel::BoundD: return "boundd";
    case ConsistencyLevel::Range: return "range";
  }
  return "?";
}

struct EnumerationCap {
  std::uint64_t max_tuples = 1'000'000;
};

namespace detail {

inline void require_checker_arity(const Checker& checker, const Instance& inst) {
  if (checker.arity() != inst.arity()) {
    throw ContractError("checker '" + checker.name() + "' has arity " + std::to_string(checker.arity()) +
                        " but the instance has arity " + std::to_string(inst.arity()));
  }
}

inline void require_within_cap(std::uint64_t tuples, const EnumerationCap& cap) {
  if (cap.max_tuples == 0) throw ContractError("enumeration cap must be at least 1");
  if (tuples > cap.max_tuples) {
    throw ResourceLimitError("enumeration of " + std::to_string(tuples) + " tuples exceeds the cap of " +
                             std::to_string(cap.max_tuples));
  }
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

/// Walks the Cartesian product of `columns` in lexicographic order, the last
/// position varying fastest. `visit(tuple, index)` returns true to stop early.
/// Returns true iff the walk was stopped by `visit`.
template <class Visit>
bool enumerate_tuples(std::span<const std::span<const Value>> columns, Visit&& visit) {
  const std::size_t n = columns.size();
  for (const auto& c : columns) {
    if (c.empty()) return false;
  }
  std::vector<std::size_t> index(n, 0);
  Assignment tuple(n);
  for (std::size_t i = 0; i < n; ++i) tuple[i] = columns[i][0];
  while (true) {
    if (visit(std::span<const Value>(tuple), std::span<const std::size_t>(index))) return true;
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++index[pos] < columns[pos].size()) {
        tuple[pos] = columns[pos][index[pos]];
        break;
      }
      index[pos] = 0;
      tuple[pos] = columns[pos][0];
      if (pos == 0) return false;
    }
    if (n == 0) return false;
  }
}

inline std::vector<std::span<const Value>> domain_columns(const Instance& inst) {
  std::vector<std::span<const Value>> cols;
  cols.reserve(inst.arity());
  for (const Domain& d : inst) cols.push_back(d.values());
  return cols;
}

enum class SupportKind { Interval, Domain };
enum class PruneScope { BoundsOnly, AllValues };

inline FilterOutcome support_fixpoint(const Checker& checker, const Instance& inst, SupportKind kind,
                                      PruneScope scope, const EnumerationCap& cap) {
  require_checker_arity(checker, inst);
  if (inst.has_empty_domain()) return FilterOutcome::inconsistent();

  const std::size_t n = inst.arity();
  std::vector<Domain> doms = inst.domains();
  std::vector<std::vector<Value>> owned(n);
  std::vector<std::span<const Value>> columns(n);
  std::vector<Value> probe(1);

  std::uint64_t tuples = 1;
  for (const Domain& d : doms) {
    tuples = saturating_mul(tuples, kind == SupportKind::Interval
                                        ? static_cast<std::uint64_t>(std::int64_t{d.max()} - d.min() + 1)
                                        : d.size());
  }
  require_within_cap(tuples, cap);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {

      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (kind == SupportKind::Interval) {
          owned[j].clear();
          for (std::int64_t v = doms[j].min(); v <= doms[j].max(); ++v) owned[j].push_back(static_cast<Value>(v));
          columns[j] = owned[j];
        } else {
          columns[j] = doms[j].values();
        }
      }
      auto supported = [&](Value v) {
        probe[0] = v;
        columns[i] = probe;
        return enumerate_tuples(std::span<const std::span<const Value>>(columns),
                                [&](std::span<const Value> t, std::span<const std::size_t>) { return checker(t); });
      };

      Domain next;
      if (scope == PruneScope::BoundsOnly) {
        const auto values = doms[i].values();
        std::size_t lo = 0;
        while (lo < values.size() && !supported(values[lo])) ++lo;
        if (lo == values.size()) return FilterOutcome::inconsistent();
        std::size_t hi = values.size() - 1;
        while (hi > lo && !supported(values[hi])) --hi;
        const Value lo_v = values[lo];
        const Value hi_v = values[hi];
        next = doms[i].filter([&](Value v) { return v >= lo_v && v <= hi_v; });
      } else {
        next = doms[i].filter(supported);
        if (next.empty()) return FilterOutcome::inconsistent();
      }
      if (next != doms[i]) {
        doms[i] = std::move(next);
        changed = true;
      }
    }
  }
  return FilterOutcome::filtered(Instance(std::move(doms)));
}

}  // namespace detail

/// Every member of the Cartesian product accepted by the checker, in
/// lexicographic order.
[[nodiscard]] inline std::vector<Assignment> solutions(const Checker& checker, const Instance& inst,
                                                       const EnumerationCap& cap = {}) {
  detail::require_checker_arity(checker, inst);
  detail::require_within_cap(inst.search_space_size(), cap);
  std::vector<Assignment> out;
  const auto columns = detail::domain_columns(inst);
  detail::enumerate_tuples(std::span<const std::span<const Value>>(columns),
                           [&](std::span<const Value> t, std::span<const std::size_t>) {
                             if (checker(t)) out.emplace_back(t.begin(), t.end());
                             return false;
                           });
  return out;
}

/// Domain (generalized arc) consistency: union of the solutions' values.
[[nodiscard]] inline FilterOutcome arc_filter(const Checker& checker, const Instance& inst,
                                              const EnumerationCap& cap = {}) {
  detail::require_checker_arity(checker, inst);
  if (inst.has_empty_domain()) return FilterOutcome::inconsistent();
  detail::require_within_cap(inst.search_space_size(), cap);

  const std::size_t n = inst.arity();
  std::vector<std::vector<char>> seen(n);
  for (std::size_t i = 0; i < n; ++i) seen[i].assign(inst[i].size(), 0);
  bool any = false;
  const auto columns = detail::domain_columns(inst);
  detail::enumerate_tuples(std::span<const std::span<const Value>>(columns),
                           [&](std::span<const Value> t, std::span<const std::size_t> idx) {
                             if (checker(t)) {
                               any = true;
                               for (std::size_t i = 0; i < n; ++i) seen[i][idx[i]] = 1;
                             }
                             return false;
                           });
  if (!any) return FilterOutcome::inconsistent();
  std::vector<Domain> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Value> kept;
    const auto values = inst[i].values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (seen[i][k]) kept.push_back(values[k]);
    }
    out.emplace_back(std::move(kept));
  }
  return FilterOutcome::filtered(Instance(std::move(out)));
}

[[nodiscard]] inline FilterOutcome bound_z_filter(const Checker& checker, const Instance& inst,
                                                  const EnumerationCap& cap = {}) {
  return detail::support_fixpoint(checker, inst, detail::SupportKind::Interval, detail::PruneScope::BoundsOnly, cap);
}

[[nodiscard]] inline FilterOutcome bound_d_filter(const Checker& checker, const Instance& inst,
                                                  const EnumerationCap& cap = {}) {
  return detail::support_fixpoint(checker, inst, detail::SupportKind::Domain, detail::PruneScope::BoundsOnly, cap);
}

[[nodiscard]] inline FilterOutcome range_filter(const Checker& checker, const Instance& inst,
                                                const EnumerationCap& cap = {}) {
  return detail::support_fixpoint(checker, inst, detail::SupportKind::Interval, detail::PruneScope::AllValues, cap);
}

[[nodiscard]] inline FilterOutcome reference_filter(ConsistencyLevel level, const Checker& checker,
                                                    const Instance& inst, const EnumerationCap& cap = {}) {
  switch (level) {
    case ConsistencyLevel::Arc: return arc_filter(checker, inst, cap);
    case ConsistencyLevel::BoundZ: return bound_z_filter(checker, inst, cap);
    case ConsistencyLevel::BoundD: return bound_d_filter(checker, inst, cap);
    case ConsistencyLevel::Range: return range_filter(checker, inst, cap);
  }
  throw ContractError("unknown consistency level");
}

/// A Filter applying the reference of the given level.
[[nodiscard]] inline Filter make_reference(ConsistencyLevel level, Checker checker, EnumerationCap cap = {}) {
  std::string name = std::string(to_string(level)) + "(" + checker.name() + ")";
  const std::size_t arity = checker.arity();
  return Filter(
      arity,
      [level, checker = std::move(checker), cap](const Instance& inst) {
        return reference_filter(level, checker, inst, cap);
      },
      std::move(name));
}

}  // namespace propcheck
