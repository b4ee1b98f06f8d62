#include "stochrank/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stochrank {

PairedTTest paired_t_test(ConstVectorRef a, ConstVectorRef b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("paired_t_test: size mismatch");
  }
  const Index n = a.size();
  if (n < 2) throw std::invalid_argument("paired_t_test: need at least 2 pairs");

  const Vector diff = a - b;
  PairedTTest out;
  out.dof = n - 1;
  out.mean_diff = diff.mean();
  const double var =
      (diff.array() - out.mean_diff).square().sum() / static_cast<double>(n - 1);
  if (var == 0.0) {
    out.degenerate = true;
    if (out.mean_diff > 0.0) {
      out.t = std::numeric_limits<double>::infinity();
      out.p_one_tailed = 0.0;
    } else if (out.mean_diff < 0.0) {
      out.t = -std::numeric_limits<double>::infinity();
      out.p_one_tailed = 1.0;
    } else {
      out.t = 0.0;
      out.p_one_tailed = 0.5;
    }
    return out;
  }
  out.t = out.mean_diff / std::sqrt(var / static_cast<double>(n));
  const boost::math::students_t dist(static_cast<double>(out.dof));
  out.p_one_tailed = boost::math::cdf(boost::math::complement(dist, out.t));
  return out;
}

}  // namespace stochrank
