#include "lrs/adarank.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lrs/spectral.hpp"

namespace lrs {

double effective_rank_estimate(const Matrix& w) {
  require_finite(w, "effective_rank_estimate: input");
  std::vector<double> norms(static_cast<std::size_t>(w.cols()));
  for (Index j = 0; j < w.cols(); ++j) {
    norms[static_cast<std::size_t>(j)] = w.col(j).norm();
  }
  double total = 0.0;
  int nonzero = 0;
  bool all_equal = true;
  double first_nonzero = 0.0;
  for (double norm : norms) {
    total += norm;
    if (norm > 0.0) {
      if (nonzero == 0) {
        first_nonzero = norm;
      } else if (norm != first_nonzero) {
        all_equal = false;
      }
      ++nonzero;
    }
  }
  if (nonzero == 0) {
    throw ValidationError("effective_rank_estimate: all columns are zero");
  }
  // Equal nonzero norms give the exact count; short-circuit so the uniform
  // case is not blurred by exp(log(k)) rounding.
  if (all_equal) {
    return static_cast<double>(nonzero);
  }
  double entropy = 0.0;
  for (double norm : norms) {
    if (norm > 0.0) {
      const double p = norm / total;
      entropy -= p * std::log(p);
    }
  }
  return std::exp(entropy);
}

RankPolicyState rank_policy_update(const RankPolicyState& state, double estimate) {
  if (estimate < 1.0) {
    throw RangeError("rank_policy_update: estimate must be >= 1");
  }
  RankPolicyState next = state;
  next.ema = state.alpha * estimate + (1.0 - state.alpha) * state.ema;
  const int target = static_cast<int>(std::ceil(next.gamma * next.ema));
  int rank = std::clamp(target, state.r_min, state.r_max);
  const int grid = std::max(state.round_to, 1);
  rank = ((rank + grid - 1) / grid) * grid;  // round up to the grid
  next.r_current = std::min(rank, state.r_max);
  return next;
}

std::pair<Matrix, Matrix> resize_factors(const Matrix& v, const Matrix& u,
                                         int r_new, Rng& rng) {
  const Index r_old = v.cols();
  if (u.cols() != r_old) {
    throw ShapeError("resize_factors: u and v have different column counts");
  }
  const Index limit = std::min(u.rows(), v.rows());
  if (r_new < 1 || r_new > limit) {
    throw RangeError("resize_factors: new rank " + std::to_string(r_new) +
                     " outside [1, " + std::to_string(limit) + "]");
  }
  if (r_new == r_old) {
    return {v, u};
  }
  if (r_new < r_old) {
    return {v.leftCols(r_new), u.leftCols(r_new)};
  }
  const auto grow = [&](const Matrix& basis) {
    Matrix out(basis.rows(), r_new);
    out.leftCols(r_old) = basis;
    for (Index j = r_old; j < r_new; ++j) {
      Vector fresh = rng.gaussian_matrix(basis.rows(), 1);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < j; ++i) {
          fresh -= out.col(i).dot(fresh) * out.col(i);
        }
      }
      out.col(j) = fresh / fresh.norm();
    }
    return out;
  };
  return {grow(v), grow(u)};
}

int critical_rank(const Matrix& m, const Matrix& g, int r_max) {
  if (m.rows() != g.rows() || m.cols() != g.cols()) {
    throw ShapeError("critical_rank: shapes differ");
  }
  const Index limit = std::min(m.rows(), m.cols()) - 1;
  if (r_max < 1 || r_max > limit) {
    throw RangeError("critical_rank: r_max outside [1, min(m,n)-1]");
  }
  const auto spec_m = spectrum(m).singular_values;
  const auto spec_g = spectrum(g).singular_values;
  const double tol_m = rank_tolerance(m.rows(), m.cols(), spec_m.front());
  const double tol_g = rank_tolerance(g.rows(), g.cols(), spec_g.front());
  int best = 0;
  for (int r = 1; r <= r_max; ++r) {
    const double sig_r_m = spec_m[static_cast<std::size_t>(r - 1)];
    const double sig_r_g = spec_g[static_cast<std::size_t>(r - 1)];
    if (sig_r_m <= tol_m || sig_r_g <= tol_g) {
      continue;  // degenerate rank, skip
    }
    const double ratio = spec_m[static_cast<std::size_t>(r)] / sig_r_m;
    const double kappa = spec_g.front() / sig_r_g;
    if (ratio * (1.0 + kappa) < 1.0) {
      best = r;
    }
  }
  return best;
}

}  // namespace lrs
