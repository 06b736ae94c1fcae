// Tests two propagators of the bundled mini-solver against references built
// from plain checkers, then shows the report of a seeded bug.

#include <iostream>

#include "propcheck/minisolver/recipe.hpp"
#include "propcheck/propcheck.hpp"

using namespace propcheck;

int main() {
  constexpr std::size_t n = 5;

  Filter arc_alldiff = make_reference(ConsistencyLevel::Arc, all_different_checker(n));
  Filter ac = mini::as_filter(mini::all_different_ac(), n);
  Filter fc = mini::as_filter(mini::all_different_fc(), n);
  assert_that(ac).filter_as(arc_alldiff);
  assert_that(ac).weaker_than(fc);
  std::cout << "alldiff-ac is arc consistent and prunes at least as much as alldiff-fc\n";

  Filter boundz_sum = make_reference(ConsistencyLevel::BoundZ, sum_checker(n, 15));
  assert_that(mini::stateful_factory(mini::sum_equals_bc(15)), GenConfig{})
      .filter_as(incremental_factory(boundz_sum));
  std::cout << "sum-bc reaches bound(Z) consistency, also across push/pop\n";

  Filter buggy = mini::as_filter(mini::with_bug(mini::BugId::SumReversedBound, mini::sum_equals_bc(15)), n);
  try {
    assert_that(buggy).filter_as(boundz_sum);
  } catch (const AssertionFailure& e) {
    std::cout << "\nseeded bug caught:\n" << e.what() << '\n';
  }
  return 0;
}
