#pragma once

#include "stochrank/metric.hpp"
#include "stochrank/types.hpp"

namespace stochrank {

// Sorted view of one noisy score vector plus the cumulative statistics that
// make rescoring a single document an O(1) (O(log n) with the rank search)
// operation. Positions are 0-based, descending by score.
//
// With W[t] the position weight, G[t]/D[t] the gain/discount of the document
// at position t, and P[t] = prod_{j<t} D[j]:
//   s_mid[t] = sum_{u<=t}        W[u]   * G[u] * P[u]      (s_mid[n-1] = value)
//   s_up[t]  = sum_{1<=u<=t}     W[u+1] * G[u] * P[u]      (W[n] := 0)
//   s_low[t] = sum_{u<=t}        W[u-1] * G[u] * P[u]      (W[-1] := 0)
// s_up skips its u = 0 term; that term is kept in sup_first and added back
// whenever a range includes position 0.
//
// Discounts can be exactly zero (a maximally relevant document under the
// cascade metrics), which zeroes every prefix product below it and would make
// the published division-based delta formulas 0/0. The state therefore also
// carries zero-skipped products ptilde[t] (over nonzero discounts only), the
// zero count zcnt[t], and the zero-skipped analog of s_low. Because zcnt is
// nondecreasing, the positions where "the prefix excluding one fixed document
// is nonzero" form a contiguous range, so deltas stay exact and O(1).
struct RankedState {
  MetricSpec spec;
  Index k = 0;                  // effective truncation
  Permutation order;            // position -> document
  std::vector<Index> position;  // document -> position
  Vector noisy;                 // scores, sorted descending, strictly
  Vector weights;               // by position
  Vector gain;                  // by position
  Vector disc;                  // by position
  Vector p;                     // size n
  Vector s_up;                  // size n
  Vector s_mid;                 // size n
  Vector s_low;                 // size n
  Vector ptilde;                // size n + 1
  std::vector<Index> zcnt;      // size n + 1
  Vector s_tilde_low;           // size n
  Index first_zero = 0;         // position of first zero discount; n if none
  Index second_zero = 0;        // position of second zero discount; n if none
  double sup_first = 0.0;       // W[1] * G[0] * P[0]
  double total = 0.0;           // metric value of this ranking
  bool constant = false;        // metric ignores scores (degenerate query)
};

// Scores must be strictly totally ordered; exact ties (measure zero after
// noise injection) are perturbed downward by one representable step and a
// warning is written to stderr. Order is never silently changed.
RankedState build_ranked_state(const MetricSpec& spec, ConstVectorRef noisy_scores,
                               ConstVectorRef relevance);

// Metric value after rescoring the document at position `pos` to `z_new`,
// everything else fixed. `z_new` must differ from every stored score.
double delta_eval(const RankedState& state, Index pos, double z_new);

// Two-sided limit of the metric in document `doc`'s score across the breaking
// point at document `breaking_doc`'s stored score:
//   lim_{d->0+} [ value(score -> b + d) - value(score -> b - d) ].
// Evaluated structurally from the cumulative statistics, not by literal
// perturbation. Zero when doc == breaking_doc.
double jump(const RankedState& state, Index doc, Index breaking_doc);

// Position-indexed variant used by the estimator hot loop.
double jump_at(const RankedState& state, Index pos_doc, Index pos_break);

}  // namespace stochrank
