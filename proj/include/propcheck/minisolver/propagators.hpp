#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "propcheck/minisolver/solver.hpp"
#include "propcheck/minisolver/trail.hpp"

namespace propcheck::mini {

/// Partitions a scope into unfixed variables (a prefix of `order_`) and
/// variables already fixed and accounted for. The prefix length is a
/// reversible counter, so backtracking brings variables back into play.
class FixedTracker {
public:
  FixedTracker(Trail& trail, std::size_t n, bool trailed = true) : order_(n), count_(trail, n), trailed_(trailed) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  /// Moves every newly fixed variable out of the unfixed prefix, calling
  /// `on_fixed(index)` for each one first.
  template <class OnFixed>
  void collect(std::span<TrailedVar* const> vars, OnFixed&& on_fixed) {
    bool again = true;
    while (again) {
      again = false;
      std::size_t k = 0;
      while (k < static_cast<std::size_t>(count_.get())) {
        const std::size_t idx = order_[k];
        if (!vars[idx]->is_fixed()) {
          ++k;
          continue;
        }
        on_fixed(idx);
        const auto last = static_cast<std::size_t>(count_.get()) - 1;
        std::swap(order_[k], order_[last]);
        if (trailed_) {
          count_.set(static_cast<std::int64_t>(last));
        } else {
          count_.set_untrailed(static_cast<std::int64_t>(last));
        }
        again = true;
      }
    }
  }

  [[nodiscard]] std::span<const std::size_t> unfixed() const {
    return std::span<const std::size_t>(order_).first(static_cast<std::size_t>(count_.get()));
  }

private:
  std::vector<std::size_t> order_;
  RevInt count_;
  bool trailed_;
};

/// sum(x) = c with bound reasoning: each variable is kept within
/// [c - sum of the others' max, c - sum of the others' min].
class SumEqualsBC final : public Propagator {
public:
  struct Defects {
    bool reversed_bound;
    bool untrailed_fixed_count;
  };

  SumEqualsBC(Trail& trail, std::vector<TrailedVar*> vars, std::int64_t target, Defects defects = {})
      : vars_(std::move(vars)),
        target_(target),
        defects_(defects),
        fixed_(trail, vars_.size(), !defects.untrailed_fixed_count),
        sum_fixed_(trail, 0) {}

  void propagate() override {
    fixed_.collect(vars_, [&](std::size_t i) { sum_fixed_.set(sum_fixed_.get() + vars_[i]->value()); });
    std::int64_t lo_sum = sum_fixed_.get();
    std::int64_t hi_sum = sum_fixed_.get();
    for (std::size_t i : fixed_.unfixed()) {
      lo_sum += vars_[i]->min();
      hi_sum += vars_[i]->max();
    }
    if (target_ < lo_sum || target_ > hi_sum) throw Inconsistency{};
    for (std::size_t i : fixed_.unfixed()) {
      TrailedVar& x = *vars_[i];
      const std::int64_t others_lo = lo_sum - x.min();
      const std::int64_t others_hi = hi_sum - x.max();
      std::int64_t lo = target_ - others_hi;
      std::int64_t hi = target_ - others_lo;
      if (defects_.reversed_bound) std::swap(lo, hi);
      x.remove_below(lo);
      x.remove_above(hi);
    }
  }

  [[nodiscard]] std::span<TrailedVar* const> scope() const override { return vars_; }
  [[nodiscard]] std::string_view name() const override { return "sum-bc"; }
  [[nodiscard]] std::string_view declared_consistency() const override { return "boundz"; }

private:
  std::vector<TrailedVar*> vars_;
  std::int64_t target_;
  Defects defects_;
  FixedTracker fixed_;
  RevInt sum_fixed_;
};

/// allDifferent by forward checking: the value of a fixed variable is removed
/// from every other variable.
class AllDifferentFC final : public Propagator {
public:
  struct Defects {
    bool skip_last;
    bool untrailed_fixed_count;
  };

  AllDifferentFC(Trail& trail, std::vector<TrailedVar*> vars, Defects defects = {})
      : vars_(std::move(vars)), defects_(defects), fixed_(trail, vars_.size(), !defects.untrailed_fixed_count) {}

  void propagate() override {
    const std::size_t last = vars_.size() - 1;
    fixed_.collect(vars_, [&](std::size_t i) {
      const Value v = vars_[i]->value();
      for (std::size_t j = 0; j < vars_.size(); ++j) {
        if (j == i || (defects_.skip_last && j == last)) continue;
        vars_[j]->remove_value(v);
      }
    });
  }

  [[nodiscard]] std::span<TrailedVar* const> scope() const override { return vars_; }
  [[nodiscard]] std::string_view name() const override { return "alldiff-fc"; }
  [[nodiscard]] std::string_view declared_consistency() const override { return "forward-checking"; }

private:
  std::vector<TrailedVar*> vars_;
  Defects defects_;
  FixedTracker fixed_;
};

/// allDifferent with domain consistency through bipartite matching.
///
/// The maximum matching of the variable/value graph is kept across calls and
/// only repaired for variables whose partner disappeared. An unmatched edge
/// (x, v) survives iff x and v share a strongly connected component of the
/// oriented residual graph, or v is reachable from a free value.
class AllDifferentAC final : public Propagator {
public:
  struct Defects {
    bool untrailed_fixed_count;
  };

  AllDifferentAC(Trail& trail, std::vector<TrailedVar*> vars, Defects defects = {})
      : vars_(std::move(vars)), fixed_(trail, vars_.size(), !defects.untrailed_fixed_count), match_(vars_.size()) {}

  void propagate() override {
    fixed_.collect(vars_, [&](std::size_t i) {
      const Value v = vars_[i]->value();
      for (std::size_t j = 0; j < vars_.size(); ++j) {
        if (j != i) vars_[j]->remove_value(v);
      }
    });
    const auto unfixed = fixed_.unfixed();
    if (unfixed.empty()) return;
    prepare_values(unfixed);
    repair_matching(unfixed);
    prune(unfixed);
  }

  [[nodiscard]] std::span<TrailedVar* const> scope() const override { return vars_; }
  [[nodiscard]] std::string_view name() const override { return "alldiff-ac"; }
  [[nodiscard]] std::string_view declared_consistency() const override { return "arc"; }

private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  [[nodiscard]] std::size_t slot(std::int64_t v) const { return static_cast<std::size_t>(v - lo_); }

  void prepare_values(std::span<const std::size_t> unfixed) {
    lo_ = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i : unfixed) {
      lo_ = std::min<std::int64_t>(lo_, vars_[i]->min());
      hi = std::max<std::int64_t>(hi, vars_[i]->max());
    }
    owner_.assign(static_cast<std::size_t>(hi - lo_ + 1), kNone);
  }

  void repair_matching(std::span<const std::size_t> unfixed) {
    // keep the previous partners that are still in the domain and unclaimed
    for (std::size_t i : unfixed) {
      if (match_[i] && vars_[i]->contains(*match_[i]) && owner_[slot(*match_[i])] == kNone) {
        owner_[slot(*match_[i])] = i;
      } else {
        match_[i].reset();
      }
    }
    for (std::size_t i : unfixed) {
      if (match_[i]) continue;
      visited_.assign(owner_.size(), 0);
      if (!augment(i)) throw Inconsistency{};
    }
  }

  bool augment(std::size_t i) {
    TrailedVar& x = *vars_[i];
    for (std::int64_t v = x.min(); v <= x.max(); ++v) {
      if (!x.contains(v)) continue;
      const std::size_t s = slot(v);
      if (visited_[s]) continue;
      visited_[s] = 1;
      if (owner_[s] == kNone || augment(owner_[s])) {
        owner_[s] = i;
        match_[i] = static_cast<Value>(v);
        return true;
      }
    }
    return false;
  }

  // Node numbering: variables by position in `unfixed`, then value slots.
  void prune(std::span<const std::size_t> unfixed) {
    const std::size_t nv = unfixed.size();
    const std::size_t nodes = nv + owner_.size();
    std::vector<std::size_t> pos(vars_.size(), kNone);
    for (std::size_t k = 0; k < nv; ++k) pos[unfixed[k]] = k;

    std::vector<std::vector<std::size_t>> adj(nodes);
    std::vector<std::uint8_t> in_graph(owner_.size(), 0);
    for (std::size_t k = 0; k < nv; ++k) {
      const std::size_t i = unfixed[k];
      TrailedVar& x = *vars_[i];
      for (std::int64_t v = x.min(); v <= x.max(); ++v) {
        if (!x.contains(v)) continue;
        const std::size_t s = slot(v);
        in_graph[s] = 1;
        if (match_[i] && *match_[i] == v) {
          adj[k].push_back(nv + s);  // matched: variable -> value
        } else {
          adj[nv + s].push_back(k);  // unmatched: value -> variable
        }
      }
    }

    std::vector<std::uint8_t> reach(nodes, 0);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < owner_.size(); ++s) {
      if (in_graph[s] && owner_[s] == kNone) {
        reach[nv + s] = 1;
        stack.push_back(nv + s);
      }
    }
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t w : adj[u]) {
        if (!reach[w]) {
          reach[w] = 1;
          stack.push_back(w);
        }
      }
    }

    const std::vector<std::size_t> comp = strongly_connected_components(adj);

    for (std::size_t k = 0; k < nv; ++k) {
      const std::size_t i = unfixed[k];
      TrailedVar& x = *vars_[i];
      std::vector<std::int64_t> doomed;
      for (std::int64_t v = x.min(); v <= x.max(); ++v) {
        if (!x.contains(v) || (match_[i] && *match_[i] == v)) continue;
        const std::size_t node = nv + slot(v);
        if (!reach[node] && comp[node] != comp[k]) doomed.push_back(v);
      }
      for (std::int64_t v : doomed) x.remove_value(v);
    }
  }

  // Tarjan's algorithm, iterative.
  static std::vector<std::size_t> strongly_connected_components(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::size_t> index(n, kNone), low(n, 0), comp(n, kNone);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;
    std::size_t counter = 0;
    std::size_t components = 0;
    for (std::size_t root = 0; root < n; ++root) {
      if (index[root] != kNone) continue;
      call.emplace_back(root, 0);
      while (!call.empty()) {
        auto& [u, edge] = call.back();
        if (edge == 0) {
          index[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = 1;
        }
        if (edge < adj[u].size()) {
          const std::size_t w = adj[u][edge++];
          if (index[w] == kNone) {
            call.emplace_back(w, 0);
          } else if (on_stack[w]) {
            low[u] = std::min(low[u], index[w]);
          }
          continue;
        }
        if (low[u] == index[u]) {
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = components;
          } while (w != u);
          ++components;
        }
        const std::size_t done = u;
        call.pop_back();
        if (!call.empty()) {
          const std::size_t parent = call.back().first;
          low[parent] = std::min(low[parent], low[done]);
        }
      }
    }
    return comp;
  }

  std::vector<TrailedVar*> vars_;
  FixedTracker fixed_;
  std::vector<std::optional<Value>> match_;
  std::int64_t lo_ = 0;
  std::vector<std::size_t> owner_;
  std::vector<std::uint8_t> visited_;
};

}  // namespace propcheck::mini
