#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace propcheck {

/// Raised when a caller breaks a documented precondition (arity mismatch,
/// pop on an empty stack, malformed configuration, ...).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Raised when an enumeration would exceed the configured tuple cap.
/// Campaigns abort on it; a pass never hides an unexhausted search.
class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Finite set of integers, stored sorted and duplicate free.
class Domain {
public:
  using value_type = std::int32_t;
  using const_iterator = std::vector<value_type>::const_iterator;

  Domain() = default;
  Domain(std::initializer_list<value_type> values) : values_(values) { normalize(); }
  explicit Domain(std::vector<value_type> values) : values_(std::move(values)) { normalize(); }

  /// Builds a domain from wide integers; values outside the 32-bit range are rejected.
  static Domain from_wide(std::span<const std::int64_t> values) {
    std::vector<value_type> narrowed;
    narrowed.reserve(values.size());
    for (std::int64_t v : values) {
      if (v < std::numeric_limits<value_type>::min() || v > std::numeric_limits<value_type>::max()) {
        throw ContractError("domain value " + std::to_string(v) + " outside signed 32-bit range");
      }
      narrowed.push_back(static_cast<value_type>(v));
    }
    return Domain(std::move(narrowed));
  }

  /// Inclusive integer interval [lo, hi]; empty when lo > hi.
  static Domain interval(value_type lo, value_type hi) {
    std::vector<value_type> values;
    if (lo <= hi) {
      values.reserve(static_cast<std::size_t>(std::int64_t{hi} - lo + 1));
      for (std::int64_t v = lo; v <= hi; ++v) values.push_back(static_cast<value_type>(v));
    }
    Domain d;
    d.values_ = std::move(values);
    return d;
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] value_type min() const {
    if (empty()) throw ContractError("min() of an empty domain");
    return values_.front();
  }
  [[nodiscard]] value_type max() const {
    if (empty()) throw ContractError("max() of an empty domain");
    return values_.back();
  }
  [[nodiscard]] bool contains(value_type v) const {
    return std::binary_search(values_.begin(), values_.end(), v);
  }
  [[nodiscard]] bool subset_of(const Domain& other) const {
    return std::includes(other.values_.begin(), other.values_.end(), values_.begin(), values_.end());
  }
  [[nodiscard]] std::span<const value_type> values() const noexcept { return values_; }
  [[nodiscard]] const_iterator begin() const noexcept { return values_.begin(); }
  [[nodiscard]] const_iterator end() const noexcept { return values_.end(); }

  [[nodiscard]] Domain without(value_type v) const {
    Domain d = *this;
    auto it = std::lower_bound(d.values_.begin(), d.values_.end(), v);
    if (it != d.values_.end() && *it == v) d.values_.erase(it);
    return d;
  }

  template <class Pred>
  [[nodiscard]] Domain filter(Pred&& keep) const {
    Domain d;
    for (value_type v : values_) {
      if (keep(v)) d.values_.push_back(v);
    }
    return d;
  }

  friend bool operator==(const Domain&, const Domain&) = default;
  friend auto operator<=>(const Domain&, const Domain&) = default;

  [[nodiscard]] std::string to_string() const {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i) out << ',';
      out << values_[i];
    }
    out << '}';
    return out.str();
  }

private:
  void normalize() {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  }

  std::vector<value_type> values_;
};

using Value = Domain::value_type;

/// A complete assignment, one value per variable.
using Assignment = std::vector<Value>;

/// Fixed-arity sequence of domains; the input and output of every filter.
class Instance {
public:
  Instance() = default;
  Instance(std::initializer_list<Domain> domains) : domains_(domains) {}
  explicit Instance(std::vector<Domain> domains) : domains_(std::move(domains)) {}

  [[nodiscard]] std::size_t arity() const noexcept { return domains_.size(); }
  [[nodiscard]] const Domain& operator[](std::size_t i) const { return domains_.at(i); }
  [[nodiscard]] const std::vector<Domain>& domains() const noexcept { return domains_; }
  [[nodiscard]] auto begin() const noexcept { return domains_.begin(); }
  [[nodiscard]] auto end() const noexcept { return domains_.end(); }

  [[nodiscard]] Instance with_domain(std::size_t i, Domain d) const {
    if (i >= arity()) throw ContractError("variable index out of range");
    Instance copy = *this;
    copy.domains_[i] = std::move(d);
    return copy;
  }

  [[nodiscard]] bool has_empty_domain() const {
    return std::any_of(domains_.begin(), domains_.end(), [](const Domain& d) { return d.empty(); });
  }

  /// Product of the domain sizes, saturating at the largest uint64.
  [[nodiscard]] std::uint64_t search_space_size() const {
    std::uint64_t product = 1;
    for (const Domain& d : domains_) {
      const auto s = static_cast<std::uint64_t>(d.size());
      if (s == 0) return 0;
      if (product > std::numeric_limits<std::uint64_t>::max() / s) {
        product = std::numeric_limits<std::uint64_t>::max();
      } else {
        product *= s;
      }
    }
    return product;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

  [[nodiscard]] std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < domains_.size(); ++i) {
      if (i) out += ',';
      out += domains_[i].to_string();
    }
    return out + "]";
  }

private:
  std::vector<Domain> domains_;
};

[[nodiscard]] inline bool member_of(std::span<const Value> assignment, const Instance& inst) {
  if (assignment.size() != inst.arity()) return false;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (!inst[i].contains(assignment[i])) return false;
  }
  return true;
}

/// Either the filtered domains (all non-empty) or a proof of inconsistency.
class FilterOutcome {
public:
  [[nodiscard]] static FilterOutcome inconsistent() { return FilterOutcome{}; }

  /// Wraps a filtered instance; an empty domain inside is a contract violation.
  [[nodiscard]] static FilterOutcome filtered(Instance inst) {
    if (inst.has_empty_domain()) {
      throw ContractError("a Filtered outcome cannot hold an empty domain");
    }
    FilterOutcome o;
    o.instance_ = std::move(inst);
    return o;
  }

  /// Maps an instance with an emptied domain to Inconsistent.
  [[nodiscard]] static FilterOutcome from_domains(Instance inst) {
    if (inst.has_empty_domain()) return inconsistent();
    return filtered(std::move(inst));
  }

  [[nodiscard]] bool is_inconsistent() const noexcept { return !instance_.has_value(); }
  [[nodiscard]] bool is_filtered() const noexcept { return instance_.has_value(); }

  [[nodiscard]] const Instance& instance() const {
    if (!instance_) throw ContractError("Inconsistent outcome has no domains");
    return *instance_;
  }

  friend bool operator==(const FilterOutcome&, const FilterOutcome&) = default;

  [[nodiscard]] std::string to_string() const {
    return instance_ ? "Filtered(" + instance_->to_string() + ")" : std::string("Inconsistent");
  }

private:
  FilterOutcome() = default;
  std::optional<Instance> instance_;
};

[[nodiscard]] inline bool is_fixed(const Domain& d) noexcept { return d.size() == 1; }

[[nodiscard]] inline bool all_fixed(const Instance& inst) {
  return std::all_of(inst.begin(), inst.end(), [](const Domain& d) { return is_fixed(d); });
}

/// A leaf of the search tree: inconsistent, or every variable fixed.
[[nodiscard]] inline bool is_leaf(const FilterOutcome& o) {
  return o.is_inconsistent() || all_fixed(o.instance());
}

namespace detail {
inline void require_same_arity(const FilterOutcome& a, const FilterOutcome& b) {
  if (a.is_filtered() && b.is_filtered() && a.instance().arity() != b.instance().arity()) {
    throw ContractError("outcome arity mismatch: " + std::to_string(a.instance().arity()) + " vs " +
                        std::to_string(b.instance().arity()));
  }
}
}  // namespace detail

[[nodiscard]] inline bool pointwise_equal(const FilterOutcome& a, const FilterOutcome& b) {
  detail::require_same_arity(a, b);
  return a == b;
}

/// Inclusion with Inconsistent as the bottom element.
[[nodiscard]] inline bool pointwise_subset(const FilterOutcome& a, const FilterOutcome& b) {
  detail::require_same_arity(a, b);
  if (a.is_inconsistent()) return true;
  if (b.is_inconsistent()) return false;
  const Instance& x = a.instance();
  const Instance& y = b.instance();
  for (std::size_t i = 0; i < x.arity(); ++i) {
    if (!x[i].subset_of(y[i])) return false;
  }
  return true;
}

/// Pointwise inclusion of plain instances (same arity required).
[[nodiscard]] inline bool pointwise_subset(const Instance& a, const Instance& b) {
  if (a.arity() != b.arity()) throw ContractError("instance arity mismatch");
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!a[i].subset_of(b[i])) return false;
  }
  return true;
}

}  // namespace propcheck
