#pragma once

#include "propcheck/branch_op.hpp"
#include "propcheck/comparator.hpp"
#include "propcheck/domain.hpp"
#include "propcheck/filter.hpp"
#include "propcheck/generator.hpp"
#include "propcheck/reference.hpp"
#include "propcheck/report.hpp"
#include "propcheck/rng.hpp"
#include "propcheck/stateful.hpp"
