#pragma once

#include "stochrank/types.hpp"

namespace stochrank {

// One-tailed paired t-test of H1: mean(a - b) > 0. `degenerate` is set when
// the differences have zero variance, in which case p is 0, 1/2 or 1 by the
// sign of the mean difference instead of a t quantile.
struct PairedTTest {
  double t = 0.0;
  double p_one_tailed = 1.0;
  Index dof = 0;
  double mean_diff = 0.0;
  bool degenerate = false;
};

PairedTTest paired_t_test(ConstVectorRef a, ConstVectorRef b);

}  // namespace stochrank
