#include "stochrank/ranked_state.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace stochrank {

namespace {

// First position whose stored score is strictly below z (n if none).
Index first_below(const Vector& sorted_desc, double z) {
  const auto it = std::lower_bound(
      sorted_desc.begin(), sorted_desc.end(), z,
      [](double element, double value) { return element > value; });
  return static_cast<Index>(it - sorted_desc.begin());
}

}  // namespace

RankedState build_ranked_state(const MetricSpec& spec, ConstVectorRef noisy_scores,
                               ConstVectorRef relevance) {
  if (spec.kind == MetricKind::dcg_rr) {
    throw std::invalid_argument(
        "build_ranked_state: fixed-order metric has no ranked state");
  }
  const Index n = noisy_scores.size();
  if (n == 0) throw std::invalid_argument("build_ranked_state: empty query");

  RankedState st;
  st.spec = spec;
  st.k = effective_truncation(spec, n);

  const GainDiscount gd = gmc_params(spec, relevance);
  st.constant = gd.constant;

  st.order = worst_argsort(noisy_scores, gd.gains, TiePolicy::noise_free_fixed);
  st.position.assign(static_cast<std::size_t>(n), 0);
  st.noisy.resize(n);
  st.gain.resize(n);
  st.disc.resize(n);
  for (Index t = 0; t < n; ++t) {
    const Index doc = st.order[static_cast<std::size_t>(t)];
    st.position[static_cast<std::size_t>(doc)] = t;
    st.noisy[t] = noisy_scores[doc];
    st.gain[t] = gd.gains[doc];
    st.disc[t] = gd.discounts[doc];
  }
  st.weights = gd.weights;

  // Exact ties survive only through pathological inputs; nudge each offender
  // just below its predecessor so the order stays the one the sort produced.
  Index perturbed = 0;
  for (Index t = 1; t < n; ++t) {
    if (st.noisy[t] >= st.noisy[t - 1]) {
      st.noisy[t] = std::nextafter(st.noisy[t - 1],
                                   -std::numeric_limits<double>::infinity());
      ++perturbed;
    }
  }
  if (perturbed > 0) {
    std::cerr << "[stochrank] warning: perturbed " << perturbed
              << " tied score(s) by one representable step\n";
  }

  st.p.resize(n);
  st.s_up.resize(n);
  st.s_mid.resize(n);
  st.s_low.resize(n);
  st.ptilde.resize(n + 1);
  st.zcnt.assign(static_cast<std::size_t>(n) + 1, 0);
  st.s_tilde_low.resize(n);
  st.first_zero = n;
  st.second_zero = n;

  double prefix = 1.0;
  double prefix_nz = 1.0;
  Index zeros = 0;
  double up = 0.0, mid = 0.0, low = 0.0, tlow = 0.0;
  st.ptilde[0] = 1.0;
  st.zcnt[0] = 0;
  for (Index t = 0; t < n; ++t) {
    st.p[t] = prefix;
    const double w = st.weights[t];
    const double w_next = (t + 1 < n) ? st.weights[t + 1] : 0.0;
    const double w_prev = (t > 0) ? st.weights[t - 1] : 0.0;
    const double core = st.gain[t] * prefix;
    mid += w * core;
    low += w_prev * core;
    if (t == 0) {
      st.sup_first = w_next * core;
    } else {
      up += w_next * core;
    }
    tlow += w_prev * st.gain[t] * prefix_nz;
    st.s_up[t] = up;
    st.s_mid[t] = mid;
    st.s_low[t] = low;
    st.s_tilde_low[t] = tlow;

    if (st.disc[t] == 0.0) {
      if (zeros == 0) st.first_zero = t;
      else if (zeros == 1) st.second_zero = t;
      ++zeros;
    } else {
      prefix_nz *= st.disc[t];
    }
    prefix *= st.disc[t];
    st.ptilde[t + 1] = prefix_nz;
    st.zcnt[static_cast<std::size_t>(t) + 1] = zeros;
  }
  st.total = st.constant ? gd.constant_value : mid;
  return st;
}

namespace {

// Sum over positions u in [a, b] of W[u-1] * G[u] * (prefix product excluding
// the mover's discount). Only positions whose "other zeros before u" count is
// zero contribute; those form a contiguous range.
double lo_range_sum(const RankedState& st, Index a, Index b, bool mover_zero,
                    double divisor) {
  Index lo = a, hi = b;
  if (mover_zero) {
    lo = std::max(lo, st.first_zero + 1);
    hi = std::min(hi, st.second_zero);
  } else {
    hi = std::min(hi, st.first_zero);
  }
  if (lo > hi) return 0.0;
  const double sum = st.s_tilde_low[hi] - st.s_tilde_low[lo - 1];
  return mover_zero ? sum : sum / divisor;
}

// Prefix product over positions j <= last, j != mover_pos. Valid only for
// mover_pos <= last.
double prefix_excluding(const RankedState& st, Index last, bool mover_zero,
                        double divisor) {
  const Index other_zeros =
      st.zcnt[static_cast<std::size_t>(last) + 1] - (mover_zero ? 1 : 0);
  if (other_zeros > 0) return 0.0;
  const double prod = st.ptilde[last + 1];
  return mover_zero ? prod : prod / divisor;
}

double delta_from_position(const RankedState& st, Index i, Index i_new) {
  if (i_new == i || st.constant) return 0.0;
  const double g = st.gain[i];
  const double d = st.disc[i];

  if (i_new < i) {
    // Document moves up; occupants of [i_new, i-1] each drop one position.
    double up_sum = st.s_up[i - 1];
    double mid_sum = st.s_mid[i - 1];
    if (i_new >= 1) {
      up_sum -= st.s_up[i_new - 1];
      mid_sum -= st.s_mid[i_new - 1];
    } else {
      up_sum += st.sup_first;
    }
    return g * (st.weights[i_new] * st.p[i_new] - st.weights[i] * st.p[i]) +
           d * up_sum - mid_sum;
  }

  // Document moves down; occupants of [i+1, i_new] each rise one position.
  const bool mover_zero = (d == 0.0);
  const double new_prefix = prefix_excluding(st, i_new, mover_zero, d);
  const double lo_sum = lo_range_sum(st, i + 1, i_new, mover_zero, d);
  const double mid_sum = st.s_mid[i_new] - st.s_mid[i];
  return g * (st.weights[i_new] * new_prefix - st.weights[i] * st.p[i]) +
         lo_sum - mid_sum;
}

}  // namespace

double delta_eval(const RankedState& state, Index pos, double z_new) {
  const Index n = state.noisy.size();
  if (pos < 0 || pos >= n) throw std::invalid_argument("delta_eval: bad position");
  const Index below = first_below(state.noisy, z_new);
  // below counts stored scores strictly above z_new unless z_new ties one.
  if (below < n && state.noisy[below] == z_new) {
    throw std::invalid_argument(
        "delta_eval: probe score ties a stored score; perturb the probe");
  }
  Index i_new;
  if (z_new > state.noisy[pos]) {
    i_new = below;  // every position in [below, pos) shifts down
  } else {
    i_new = below - 1;  // the mover itself was counted among scores above
  }
  return state.total + delta_from_position(state, pos, i_new);
}

double jump_at(const RankedState& st, Index pos_doc, Index pos_break) {
  if (pos_doc == pos_break || st.constant) return 0.0;
  const Index n = st.noisy.size();
  const double g = st.gain[pos_doc];
  const double d = st.disc[pos_doc];
  const double gs = st.gain[pos_break];
  const double ds = st.disc[pos_break];
  const double w_s = st.weights[pos_break];

  if (pos_break < pos_doc) {
    // Crossing a score above: positions pos_break and pos_break+1 trade roles.
    const double w_next = (pos_break + 1 < n) ? st.weights[pos_break + 1] : 0.0;
    return st.p[pos_break] * (w_s * (g - gs) + w_next * (gs * d - g * ds));
  }
  // Crossing a score below the mover's own.
  const double w_prev = (pos_break > 0) ? st.weights[pos_break - 1] : 0.0;
  const double prefix =
      prefix_excluding(st, pos_break - 1, d == 0.0, d);
  return prefix * (w_prev * (g - gs) + w_s * (gs * d - g * ds));
}

double jump(const RankedState& state, Index doc, Index breaking_doc) {
  const Index n = state.noisy.size();
  if (doc < 0 || doc >= n || breaking_doc < 0 || breaking_doc >= n) {
    throw std::invalid_argument("jump: document index out of range");
  }
  return jump_at(state, state.position[static_cast<std::size_t>(doc)],
                 state.position[static_cast<std::size_t>(breaking_doc)]);
}

}  // namespace stochrank
