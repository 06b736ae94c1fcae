#pragma once

// Helpers shared by the test binaries: exhaustive instance sweeps, a direct
// brute-force arc oracle, and small checkers written without the library.

#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "propcheck/domain.hpp"

namespace testing_support {

using propcheck::Domain;
using propcheck::FilterOutcome;
using propcheck::Instance;
using propcheck::Value;

using Tuple = std::vector<Value>;
using Pred = std::function<bool(const Tuple&)>;

inline bool distinct(const Tuple& t) {
  return std::set<Value>(t.begin(), t.end()).size() == t.size();
}

inline Pred sums_to(std::int64_t c) {
  return [c](const Tuple& t) { return std::accumulate(t.begin(), t.end(), std::int64_t{0}) == c; };
}

/// Every non-empty subset of lo..hi, ordered by bitmask.
inline std::vector<Domain> all_subsets(Value lo, Value hi) {
  const int width = hi - lo + 1;
  std::vector<Domain> out;
  for (unsigned mask = 1; mask < (1u << width); ++mask) {
    std::vector<Value> values;
    for (int b = 0; b < width; ++b) {
      if (mask & (1u << b)) values.push_back(lo + b);
    }
    out.emplace_back(std::move(values));
  }
  return out;
}

/// Calls visit on every instance of the given arity over non-empty subsets of lo..hi.
inline void for_each_instance(std::size_t arity, Value lo, Value hi, const std::function<void(const Instance&)>& visit) {
  const std::vector<Domain> subsets = all_subsets(lo, hi);
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    std::vector<Domain> doms;
    for (std::size_t i : idx) doms.push_back(subsets[i]);
    visit(Instance(std::move(doms)));
    std::size_t k = arity;
    while (k > 0 && ++idx[k - 1] == subsets.size()) idx[--k] = 0;
    if (k == 0) return;
  }
}

inline void collect_tuples(const Instance& inst, std::size_t pos, Tuple& cur, std::vector<Tuple>& out) {
  if (pos == inst.arity()) {
    out.push_back(cur);
    return;
  }
  for (Value v : inst[pos]) {
    cur.push_back(v);
    collect_tuples(inst, pos + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<Tuple> brute_solutions(const Instance& inst, const Pred& p) {
  std::vector<Tuple> all;
  Tuple cur;
  collect_tuples(inst, 0, cur, all);
  std::vector<Tuple> sols;
  for (auto& t : all) {
    if (p(t)) sols.push_back(t);
  }
  return sols;
}

/// Union of the solutions' values per variable; Inconsistent when there are none.
inline FilterOutcome brute_arc(const Instance& inst, const Pred& p) {
  const auto sols = brute_solutions(inst, p);
  if (sols.empty()) return FilterOutcome::inconsistent();
  std::vector<std::set<Value>> keep(inst.arity());
  for (const auto& t : sols) {
    for (std::size_t i = 0; i < t.size(); ++i) keep[i].insert(t[i]);
  }
  std::vector<Domain> doms;
  for (const auto& s : keep) doms.emplace_back(std::vector<Value>(s.begin(), s.end()));
  return FilterOutcome::filtered(Instance(std::move(doms)));
}


/// Naive bound/range oracle. A support for (i, v) is a tuple accepted by p
/// with v at i and every other position drawn from that variable's interval
/// (interval = true) or its domain. With bounds_only, only the extreme values
/// are ever removed. Iterates until nothing changes.
inline FilterOutcome brute_support(const Instance& start, const Pred& p, bool interval, bool bounds_only) {
  std::vector<std::vector<Value>> doms;
  for (const Domain& d : start) doms.emplace_back(d.begin(), d.end());
  auto supported = [&](std::size_t i, Value v) {
    std::vector<std::vector<Value>> cols(doms.size());
    for (std::size_t j = 0; j < doms.size(); ++j) {
      if (j == i) {
        cols[j] = {v};
      } else if (interval) {
        for (Value w = doms[j].front(); w <= doms[j].back(); ++w) cols[j].push_back(w);
      } else {
        cols[j] = doms[j];
      }
    }
    std::vector<Domain> ds;
    for (auto& c : cols) ds.emplace_back(c);
    return !brute_solutions(Instance(std::move(ds)), p).empty();
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < doms.size(); ++i) {
      if (doms[i].empty()) return FilterOutcome::inconsistent();
      if (bounds_only) {
        while (!doms[i].empty() && !supported(i, doms[i].front())) {
          doms[i].erase(doms[i].begin());
          changed = true;
        }
        while (!doms[i].empty() && !supported(i, doms[i].back())) {
          doms[i].pop_back();
          changed = true;
        }
      } else {
        std::vector<Value> kept;
        for (Value v : doms[i]) {
          if (supported(i, v)) kept.push_back(v);
        }
        if (kept.size() != doms[i].size()) changed = true;
        doms[i] = kept;
      }
      if (doms[i].empty()) return FilterOutcome::inconsistent();
    }
  }
  std::vector<Domain> out;
  for (auto& d : doms) out.emplace_back(d);
  return FilterOutcome::filtered(Instance(std::move(out)));
}

inline Instance inst(std::initializer_list<Domain> d) { return Instance(d); }

inline FilterOutcome filtered(std::initializer_list<Domain> d) { return FilterOutcome::filtered(Instance(d)); }

}  // namespace testing_support
