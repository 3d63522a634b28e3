#pragma once

#include <vector>

#include "lrs/matrix.hpp"

namespace lrs {

/// Non-increasing singular values plus the count above the rank tolerance.
struct SpectrumSummary {
  std::vector<double> singular_values;
  int rank_numerical = 0;
};

struct TruncatedSvd {
  Matrix u;                // m x k, orthonormal columns
  std::vector<double> s;   // k values, non-increasing
  Matrix v;                // n x k, orthonormal columns
};

/// Full singular spectrum of `a`, sorted non-increasing.
SpectrumSummary spectrum(const Matrix& a);

/// Rank-k truncated SVD. Throws RangeError for k outside [1, min(m,n)] and
/// ValidationError for non-finite input.
TruncatedSvd svd_truncated(const Matrix& a, int k);

/// Sum of the top r singular values.
double kyfan_norm(const Matrix& a, int r);

/// Dual of the Ky Fan r-norm: max{sigma_1(a), nuclear(a)/r}.
/// (Not max{sigma_1, frobenius/sqrt(r)}, which underestimates it.)
double kyfan_dual_norm(const Matrix& a, int r);

/// Rank-r polar factor U_r V_r^T from the truncated SVD; the maximizer of
/// <a, D> over the Ky Fan dual unit ball. Throws DegenerateRankError when
/// sigma_r is below the rank tolerance.
Matrix polar_rank_r(const Matrix& a, int r);

/// Largest principal angle between the column spaces of two orthonormal
/// bases, in [0, pi/2]. Both inputs must be m x k with orthonormal columns
/// (checked within 1e-8).
double principal_angle_max(const Matrix& u1, const Matrix& u2);

/// Operator norm of u u^T - uref uref^T, in [0, 1]; equals
/// sin(principal_angle_max).
double projector_error(const Matrix& u, const Matrix& uref);

/// sigma_1(a) / sigma_r(a). Throws DegenerateRankError when sigma_r is
/// below the rank tolerance.
double condition_at_rank(const Matrix& a, int r);

/// sigma_{r+1}(a) / sigma_r(a), in [0, 1]. Requires r+1 <= min(m,n).
double spectral_ratio(const Matrix& a, int r);

}  // namespace lrs
