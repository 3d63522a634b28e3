#pragma once

#include <utility>

#include "lrs/matrix.hpp"
#include "lrs/rng.hpp"

namespace lrs {

/// State of the EMA / clip / round rank policy.
struct RankPolicyState {
  int r_current = 8;
  double ema = 8.0;      // smoothed effective-rank estimate
  double alpha = 0.1;    // EMA smoothing, in (0, 1]
  double gamma = 1.1;    // buffer multiplier, >= 1
  int r_min = 8;
  int r_max = 8;
  int round_to = 8;      // granularity of the rank grid
};

/// Spectral-entropy effective rank of `w`: exp of the entropy of the
/// normalized column norms. In [1, cols]; equals the number of nonzero
/// columns when all their norms are equal; invariant under global scaling.
/// Throws ValidationError for an all-zero input.
double effective_rank_estimate(const Matrix& w);

/// One policy step: EMA update, target = ceil(gamma * ema), clip to
/// [r_min, r_max], round up to the granularity grid, re-clip to r_max.
RankPolicyState rank_policy_update(const RankPolicyState& state, double estimate);

/// Resizes warm-start factors to a new rank: truncate columns when
/// shrinking, append seeded random orthogonalized columns when growing.
std::pair<Matrix, Matrix> resize_factors(const Matrix& v, const Matrix& u,
                                         int r_new, Rng& rng);

/// Largest r in [1, r_max] with
/// spectral_ratio(m, r) * (1 + condition_at_rank(g, r)) < 1, or 0 if none.
/// Ranks where sigma_r of either input is numerically zero are skipped.
int critical_rank(const Matrix& m, const Matrix& g, int r_max);

}  // namespace lrs
