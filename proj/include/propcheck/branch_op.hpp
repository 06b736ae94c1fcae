#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "propcheck/domain.hpp"

namespace propcheck {

enum class Relation { Eq, Neq, Lt, Gt };

[[nodiscard]] constexpr std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::Eq: return "=";
    case Relation::Neq: return "!=";
    case Relation::Lt: return "<";
    case Relation::Gt: return ">";
  }
  return "?";
}

[[nodiscard]] constexpr bool holds(Relation r, Value v, Value constant) noexcept {
  switch (r) {
    case Relation::Eq: return v == constant;
    case Relation::Neq: return v != constant;
    case Relation::Lt: return v < constant;
    case Relation::Gt: return v > constant;
  }
  return false;
}

struct Push {
  friend bool operator==(const Push&, const Push&) = default;
};

struct Pop {
  friend bool operator==(const Pop&, const Pop&) = default;
};

struct RestrictDomain {
  std::size_t index = 0;
  Relation relation = Relation::Eq;
  Value constant = 0;
  friend bool operator==(const RestrictDomain&, const RestrictDomain&) = default;
};

/// A search-tree move: save the state, restore it, or restrict one domain.
using BranchOp = std::variant<Push, Pop, RestrictDomain>;

[[nodiscard]] inline std::string to_string(const BranchOp& op) {
  if (std::holds_alternative<Push>(op)) return "push";
  if (std::holds_alternative<Pop>(op)) return "pop";
  const auto& r = std::get<RestrictDomain>(op);
  return "x" + std::to_string(r.index) + " " + std::string(to_string(r.relation)) + " " + std::to_string(r.constant);
}

}  // namespace propcheck
