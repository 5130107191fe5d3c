#pragma once

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "compopt/problem.hpp"

namespace compopt::testing {

// Two-reward scalar portfolio toy (r = {1, 3}): the composition reduces to
// P(x) = x^2 - 2x (+ regularizer), minimized at x = 1 with value -1.
inline std::vector<Vector> toy_rewards() {
  Vector r1(1), r2(1);
  r1 << 1.0;
  r2 << 3.0;
  return {r1, r2};
}

}  // namespace compopt::testing
