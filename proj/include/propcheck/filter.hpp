#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>

#include "propcheck/domain.hpp"

namespace propcheck {

/// A static filtering algorithm: maps input domains to filtered domains.
///
/// Filters must be deterministic and contracting (every output domain a
/// subset of its input). The comparator verifies contraction on every call.
class Filter {
public:
  using Function = std::function<FilterOutcome(const Instance&)>;

  Filter(std::size_t arity, Function fn, std::string name = "filter")
      : arity_(arity), fn_(std::move(fn)), name_(std::move(name)) {
    if (arity_ == 0) throw ContractError("filter arity must be at least 1");
    if (!fn_) throw ContractError("filter function is empty");
  }

  [[nodiscard]] std::size_t arity() const noexcept { return arity_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  [[nodiscard]] FilterOutcome apply(const Instance& inst) const {
    if (inst.arity() != arity_) {
      throw ContractError("filter '" + name_ + "' has arity " + std::to_string(arity_) +
                          " but received an instance of arity " + std::to_string(inst.arity()));
    }
    return fn_(inst);
  }
  [[nodiscard]] FilterOutcome operator()(const Instance& inst) const { return apply(inst); }

private:
  std::size_t arity_;
  Function fn_;
  std::string name_;
};

/// Returns its input unchanged; the weakest possible filter.
[[nodiscard]] inline Filter identity_filter(std::size_t arity) {
  return Filter(arity, [](const Instance& inst) { return FilterOutcome::from_domains(inst); }, "identity");
}

}  // namespace propcheck
