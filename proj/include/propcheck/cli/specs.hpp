#pragma once

// Textual names for checkers, reference levels and mini-solver recipes, as
// accepted on the command line and stored in reports:
//
//   checker  alldiff | sum=<c>
//   level    arc | boundz | boundd | range
//   trusted  <level>:<checker>
//   tested   <level>:<checker> | sum-bc[=<c>] | alldiff-fc | alldiff-ac,
//            optionally suffixed +bug:<BugId>

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>

#include "propcheck/filter.hpp"
#include "propcheck/minisolver/recipe.hpp"
#include "propcheck/reference.hpp"
#include "propcheck/stateful.hpp"

namespace propcheck::cli {

/// Malformed command line or document; maps to exit code 2.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

template <class Int>
[[nodiscard]] std::optional<Int> parse_int(std::string_view s) {
  Int value{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return value;
}

/// Decimal fraction with a dot separator, independent of the locale.
[[nodiscard]] inline std::optional<double> parse_decimal(std::string_view s) {
  double value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

struct CheckerSpec {
  enum class Kind { AllDiff, Sum };
  Kind kind = Kind::AllDiff;
  std::int64_t target = 0;

  [[nodiscard]] Checker make(std::size_t arity) const {
    return kind == Kind::AllDiff ? all_different_checker(arity) : sum_checker(arity, target);
  }
  [[nodiscard]] std::string text() const { return kind == Kind::AllDiff ? "alldiff" : "sum=" + std::to_string(target); }
  friend bool operator==(const CheckerSpec&, const CheckerSpec&) = default;
};

[[nodiscard]] inline CheckerSpec parse_checker(std::string_view s) {
  if (s == "alldiff") return {CheckerSpec::Kind::AllDiff, 0};
  if (s.starts_with("sum=")) {
    if (auto c = parse_int<std::int64_t>(s.substr(4))) return {CheckerSpec::Kind::Sum, *c};
  }
  throw UsageError("unknown checker '" + std::string(s) + "' (valid: alldiff, sum=<integer>)");
}

[[nodiscard]] inline ConsistencyLevel parse_level(std::string_view s) {
  for (ConsistencyLevel l : {ConsistencyLevel::Arc, ConsistencyLevel::BoundZ, ConsistencyLevel::BoundD,
                             ConsistencyLevel::Range}) {
    if (s == to_string(l)) return l;
  }
  throw UsageError("unknown level '" + std::string(s) + "' (valid: arc, boundz, boundd, range)");
}

struct ReferenceSpec {
  ConsistencyLevel level = ConsistencyLevel::Arc;
  CheckerSpec checker;
  [[nodiscard]] std::string text() const { return std::string(to_string(level)) + ":" + checker.text(); }
};

[[nodiscard]] inline ReferenceSpec parse_reference(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError("expected <level>:<checker>, got '" + std::string(s) + "'");
  }
  return {parse_level(s.substr(0, colon)), parse_checker(s.substr(colon + 1))};
}

/// A filter under test: either a reference filter or a mini-solver recipe.
struct Subject {
  std::variant<ReferenceSpec, mini::Recipe> impl;

  [[nodiscard]] Filter filter(std::size_t arity, EnumerationCap cap = {}) const {
    if (const auto* ref = std::get_if<ReferenceSpec>(&impl)) {
      return make_reference(ref->level, ref->checker.make(arity), cap);
    }
    return mini::as_filter(std::get<mini::Recipe>(impl), arity);
  }

  [[nodiscard]] StatefulFactory stateful(std::size_t arity, EnumerationCap cap = {}) const {
    if (std::holds_alternative<ReferenceSpec>(impl)) return incremental_factory(filter(arity, cap));
    return mini::stateful_factory(std::get<mini::Recipe>(impl));
  }
};

/// Parses a tested recipe. A bare "sum-bc" takes its target from the trusted
/// checker, which must then be a sum.
[[nodiscard]] inline Subject parse_tested(std::string_view s, const CheckerSpec& trusted_checker) {
  std::string_view base = s;
  mini::BugId bug = mini::BugId::None;
  if (const auto plus = s.find("+bug:"); plus != std::string_view::npos) {
    base = s.substr(0, plus);
    const auto id = mini::parse_bug_id(s.substr(plus + 5));
    if (!id) {
      throw UsageError("unknown bug '" + std::string(s.substr(plus + 5)) +
                       "' (valid: REVERSED_BOUND, FC_SKIP_LAST, TRAIL_NO_RESTORE, NONE)");
    }
    bug = *id;
  }

  std::optional<mini::Recipe> recipe;
  if (base == "alldiff-fc") {
    recipe = mini::all_different_fc();
  } else if (base == "alldiff-ac") {
    recipe = mini::all_different_ac();
  } else if (base == "sum-bc") {
    if (trusted_checker.kind != CheckerSpec::Kind::Sum) {
      throw UsageError("recipe 'sum-bc' without a target needs a sum=<c> trusted checker; use sum-bc=<c>");
    }
    recipe = mini::sum_equals_bc(trusted_checker.target);
  } else if (base.starts_with("sum-bc=")) {
    const auto c = parse_int<std::int64_t>(base.substr(7));
    if (!c) throw UsageError("bad target in '" + std::string(base) + "'");
    recipe = mini::sum_equals_bc(*c);
  }

  if (recipe) {
    try {
      return Subject{mini::with_bug(bug, *recipe)};
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
  }
  if (bug != mini::BugId::None) throw UsageError("bugs can only be injected into mini-solver recipes");
  if (base.find(':') != std::string_view::npos) return Subject{parse_reference(base)};
  throw UsageError("unknown recipe '" + std::string(base) +
                   "' (valid: sum-bc[=<c>], alldiff-fc, alldiff-ac, <level>:<checker>, optionally +bug:<BugId>)");
}

}  // namespace propcheck::cli
