#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "propcheck/domain.hpp"
#include "propcheck/filter.hpp"
#include "propcheck/generator.hpp"
#include "propcheck/reference.hpp"
#include "propcheck/report.hpp"

namespace propcheck {

struct CampaignOptions {
  EnumerationCap cap{};
  std::size_t shrink_budget = kDefaultShrinkBudget;
  /// Oversized draws tolerated per test before the campaign gives up.
  std::size_t max_redraws_per_test = 1000;
};

/// Result of running both filters on one instance.
struct Verdict {
  FilterOutcome trusted;
  FilterOutcome tested;
  std::optional<FailureKind> failure;
  std::string message;

  [[nodiscard]] bool failed() const noexcept { return failure.has_value(); }
};

namespace detail {

/// Runs a filter under test. Anything it throws other than a contract or
/// resource error counts as a claim of inconsistency.
inline FilterOutcome run_tested(const Filter& f, const Instance& inst) {
  try {
    return f.apply(inst);
  } catch (const ContractError&) {
    throw;
  } catch (const ResourceLimitError&) {
    throw;
  } catch (const std::exception&) {
    return FilterOutcome::inconsistent();
  }
}

inline std::optional<std::string> structural_violation(const Instance& input, const FilterOutcome& out,
                                                       std::string_view side, FailureKind& kind) {
  if (out.is_inconsistent()) return std::nullopt;
  if (out.instance().arity() != input.arity()) {
    kind = FailureKind::ArityViolation;
    return std::string(side) + " filter returned arity " + std::to_string(out.instance().arity()) + " for input of arity " +
           std::to_string(input.arity());
  }
  for (std::size_t i = 0; i < input.arity(); ++i) {
    if (!out.instance()[i].subset_of(input[i])) {
      kind = FailureKind::NonContracting;
      return std::string(side) + " filter added values to x" + std::to_string(i) + ": " + out.instance()[i].to_string() +
             " is not within " + input[i].to_string();
    }
  }
  return std::nullopt;
}

/// Product of the interval hulls: an upper bound on what any reference
/// filter enumerates for the instance.
inline std::uint64_t hull_space_size(const Instance& inst) {
  std::uint64_t product = 1;
  for (const Domain& d : inst) {
    if (d.empty()) return 0;
    product = saturating_mul(product, static_cast<std::uint64_t>(std::int64_t{d.max()} - d.min() + 1));
  }
  return product;
}

}  // namespace detail

/// Compares two outcomes for the same input under `mode`.
/// Throws ContractError when both are filtered with different arities.
[[nodiscard]] inline Verdict compare_outcomes(FilterOutcome trusted, FilterOutcome tested, ComparisonMode mode) {
  Verdict v{std::move(trusted), std::move(tested), std::nullopt, {}};
  if (mode == ComparisonMode::Equality) {
    if (pointwise_equal(v.trusted, v.tested)) return v;
    if (v.trusted.is_inconsistent()) {
      v.failure = FailureKind::OnlyTrustedInconsistent;
      v.message = "trusted filter proved inconsistency; tested filter returned domains";
    } else if (v.tested.is_inconsistent()) {
      v.failure = FailureKind::OnlyTestedInconsistent;
      v.message = "tested filter claimed inconsistency; trusted filter returned domains";
    } else {
      v.failure = FailureKind::DomainMismatch;
      const Instance& t = v.trusted.instance();
      const Instance& s = v.tested.instance();
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (t[i] != s[i]) {
          v.message = "filtered domains differ at x" + std::to_string(i) + ": trusted " + t[i].to_string() +
                      ", tested " + s[i].to_string();
          break;
        }
      }
    }
    return v;
  }
  if (pointwise_subset(v.tested, v.trusted)) return v;
  v.failure = FailureKind::NotIncluded;
  if (v.trusted.is_inconsistent()) {
    v.message = "trusted filter proved inconsistency; tested filter returned domains";
  } else {
    const Instance& t = v.trusted.instance();
    const Instance& s = v.tested.instance();
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (!s[i].subset_of(t[i])) {
        v.message = "tested filter is weaker at x" + std::to_string(i) + ": tested " + s[i].to_string() +
                    " not within trusted " + t[i].to_string();
        break;
      }
    }
  }
  return v;
}

/// Applies both filters to `inst` and compares them.
[[nodiscard]] inline Verdict evaluate(const Filter& trusted, const Filter& tested, const Instance& inst,
                                      ComparisonMode mode) {
  FilterOutcome t = trusted.apply(inst);
  FilterOutcome s = detail::run_tested(tested, inst);
  FailureKind kind{};
  for (auto [side, out] : {std::pair<std::string_view, const FilterOutcome*>{"trusted", &t}, {"tested", &s}}) {
    if (auto msg = detail::structural_violation(inst, *out, side, kind)) {
      return Verdict{std::move(t), std::move(s), kind, *msg};
    }
  }
  return compare_outcomes(std::move(t), std::move(s), mode);
}

/// Draws an instance whose enumeration stays within the cap, counting redraws.
[[nodiscard]] inline Instance draw_within_cap(Rng& rng, const GenConfig& cfg, const CampaignOptions& opts,
                                              std::size_t& redraws) {
  for (std::size_t attempt = 0;; ++attempt) {
    Instance inst = generate_instance(rng, cfg);
    if (detail::hull_space_size(inst) <= opts.cap.max_tuples) return inst;
    if (attempt + 1 >= opts.max_redraws_per_test) {
      throw ResourceLimitError("could not draw an instance within the enumeration cap after " +
                               std::to_string(opts.max_redraws_per_test) + " attempts");
    }
    ++redraws;
  }
}

/// Differential campaign: cfg.n_tests seeded instances, stops and shrinks at
/// the first failing one.
[[nodiscard]] inline TestReport run_campaign(const Filter& trusted, const Filter& tested, const GenConfig& cfg,
                                             ComparisonMode mode, const CampaignOptions& opts = {}) {
  cfg.validate();
  if (trusted.arity() != tested.arity()) {
    throw ContractError("trusted filter '" + trusted.name() + "' has arity " + std::to_string(trusted.arity()) +
                        " but tested filter '" + tested.name() + "' has arity " + std::to_string(tested.arity()));
  }
  if (trusted.arity() != cfg.n_vars) {
    throw ContractError("filters have arity " + std::to_string(trusted.arity()) + " but GenConfig.nVars is " +
                        std::to_string(cfg.n_vars));
  }
  TestReport report;
  report.seed = cfg.seed;
  report.mode = mode;
  report.kind = CampaignKind::Static;

  Rng rng(cfg.seed);
  for (std::size_t test = 1; test <= cfg.n_tests; ++test) {
    const Instance inst = draw_within_cap(rng, cfg, opts, report.redraws);
    Verdict verdict = evaluate(trusted, tested, inst, mode);
    report.tests_run = test;
    if (!verdict.failed()) continue;

    auto fails = [&](const Instance& candidate) { return evaluate(trusted, tested, candidate, mode).failed(); };
    ShrinkResult shrunk = shrink(inst, fails, opts.shrink_budget);
    Verdict final_verdict = evaluate(trusted, tested, shrunk.instance, mode);
    report.passed = false;
    report.failure = Failure{inst,
                             shrunk.instance,
                             std::move(final_verdict.trusted),
                             std::move(final_verdict.tested),
                             mode,
                             *final_verdict.failure,
                             final_verdict.message,
                             shrunk.minimal,
                             {}};
    return report;
  }
  return report;
}

/// Passes iff both filters agree pointwise on every generated instance.
[[nodiscard]] inline TestReport check(const Filter& trusted, const Filter& tested, const GenConfig& cfg = {},
                                      const CampaignOptions& opts = {}) {
  return run_campaign(trusted, tested, cfg, ComparisonMode::Equality, opts);
}

/// Passes iff the tested outcome is always included in the trusted one.
/// Inclusion only: it does not by itself show that no solution is removed.
[[nodiscard]] inline TestReport stronger(const Filter& trusted, const Filter& tested, const GenConfig& cfg = {},
                                         const CampaignOptions& opts = {}) {
  return run_campaign(trusted, tested, cfg, ComparisonMode::TestedSubsetOfTrusted, opts);
}

/// Fluent assertions over a static filter:
///
///   assert_that(tested).filter_as(arc_reference).weaker_than(other);
///
/// filter_as(t) runs check(t, tested). weaker_than(t) runs stronger(t, tested):
/// it passes when t is the weaker filter, i.e. tested's outcome is always
/// included in t's. Each clause runs its own campaign on the same GenConfig and throws
/// AssertionFailure with the failing report.
class FilterAssert {
public:
  FilterAssert(Filter tested, GenConfig cfg, CampaignOptions opts)
      : tested_(std::move(tested)), cfg_(cfg), opts_(opts) {}

  FilterAssert& filter_as(const Filter& trusted) {
    TestReport r = check(trusted, tested_, cfg_, opts_);
    if (!r.passed) throw AssertionFailure(std::move(r));
    return *this;
  }

  FilterAssert& weaker_than(const Filter& trusted) {
    TestReport r = stronger(trusted, tested_, cfg_, opts_);
    if (!r.passed) throw AssertionFailure(std::move(r));
    return *this;
  }

private:
  Filter tested_;
  GenConfig cfg_;
  CampaignOptions opts_;
};

[[nodiscard]] inline FilterAssert assert_that(Filter tested, GenConfig cfg, CampaignOptions opts = {}) {
  return FilterAssert(std::move(tested), cfg, opts);
}

/// Default generation parameters with the arity taken from the filter.
[[nodiscard]] inline FilterAssert assert_that(Filter tested) {
  GenConfig cfg;
  cfg.n_vars = tested.arity();
  return FilterAssert(std::move(tested), cfg, {});
}

}  // namespace propcheck
