#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "propcheck/branch_op.hpp"
#include "propcheck/domain.hpp"
#include "propcheck/generator.hpp"

namespace propcheck {

enum class ComparisonMode {
  Equality,              ///< outcomes must be pointwise equal
  TestedSubsetOfTrusted  ///< tested outcome must be included in the trusted one
};

enum class CampaignKind { Static, Dives };

enum class FailureKind {
  DomainMismatch,           ///< both filtered, domains differ
  OnlyTrustedInconsistent,  ///< trusted proved inconsistency, tested did not
  OnlyTestedInconsistent,   ///< tested claimed inconsistency, trusted did not
  NotIncluded,              ///< tested outcome not a subset of the trusted one
  NonContracting,           ///< a filter returned values absent from its input
  ArityViolation            ///< a filter returned an instance of the wrong arity
};

[[nodiscard]] constexpr std::string_view to_string(FailureKind k) noexcept {
  switch (k) {
    case FailureKind::DomainMismatch: return "domain-mismatch";
    case FailureKind::OnlyTrustedInconsistent: return "only-trusted-inconsistent";
    case FailureKind::OnlyTestedInconsistent: return "only-tested-inconsistent";
    case FailureKind::NotIncluded: return "not-included";
    case FailureKind::NonContracting: return "non-contracting";
    case FailureKind::ArityViolation: return "arity-violation";
  }
  return "?";
}

[[nodiscard]] constexpr std::string_view to_string(ComparisonMode m) noexcept {
  return m == ComparisonMode::Equality ? "check" : "stronger";
}

struct Failure {
  Instance original;
  Instance shrunk;
  FilterOutcome trusted;  ///< trusted outcome on the shrunk instance
  FilterOutcome tested;   ///< tested outcome on the shrunk instance
  ComparisonMode mode;
  FailureKind kind;
  std::string message;
  bool minimal = true;
  /// Operations issued after setup up to the mismatch (dive campaigns only).
  std::vector<BranchOp> transcript;

  friend bool operator==(const Failure&, const Failure&) = default;
};

struct TestReport {
  bool passed = true;
  std::size_t tests_run = 0;
  std::uint64_t seed = 0;
  CampaignKind kind = CampaignKind::Static;
  ComparisonMode mode = ComparisonMode::Equality;
  /// Instances discarded because their enumeration would exceed the cap.
  std::size_t redraws = 0;
  /// Dives cut short by DiveConfig::max_depth.
  std::size_t depth_cap_hits = 0;
  std::optional<Failure> failure;

  friend bool operator==(const TestReport&, const TestReport&) = default;

  [[nodiscard]] std::string summary() const {
    std::ostringstream out;
    out << (kind == CampaignKind::Dives ? "dives" : to_string(mode)) << " campaign, seed " << seed << ": ";
    if (passed) {
      out << "passed " << tests_run << (kind == CampaignKind::Dives ? " dives" : " tests");
      return out.str();
    }
    const Failure& f = *failure;
    out << "FAILED after " << tests_run << (kind == CampaignKind::Dives ? " dives" : " tests") << " ("
        << to_string(f.kind) << ")\n  " << f.message << "\n  original: " << f.original.to_string()
        << "\n  shrunk:   " << f.shrunk.to_string() << (f.minimal ? "" : " (shrink budget exhausted)")
        << "\n  trusted:  " << f.trusted.to_string() << "\n  tested:   " << f.tested.to_string();
    if (!f.transcript.empty()) {
      out << "\n  transcript:";
      for (const BranchOp& op : f.transcript) out << ' ' << '[' << to_string(op) << ']';
    }
    return out.str();
  }
};

/// Thrown by the assertion builders; carries the full failing report.
class AssertionFailure : public std::runtime_error {
public:
  explicit AssertionFailure(TestReport report)
      : std::runtime_error(report.summary()), report_(std::move(report)) {}
  [[nodiscard]] const TestReport& report() const noexcept { return report_; }

private:
  TestReport report_;
};

}  // namespace propcheck
