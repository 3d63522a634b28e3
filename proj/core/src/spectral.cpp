#include "lrs/spectral.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lrs {

namespace {

std::vector<double> singular_values_of(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& vals = svd.singularValues();
  return std::vector<double>(vals.data(), vals.data() + vals.size());
}

void check_rank_arg(const Matrix& a, int r, const char* op) {
  const Index kmax = std::min(a.rows(), a.cols());
  if (r < 1 || r > kmax) {
    throw RangeError(std::string(op) + ": rank " + std::to_string(r) +
                     " outside [1, " + std::to_string(kmax) + "]");
  }
}

template <typename Values>
[[noreturn]] void throw_degenerate(const Values& s, double tol, int r,
                                   const char* op) {
  int numerical_rank = 0;
  for (Index i = 0; i < static_cast<Index>(s.size()); ++i) {
    if (s[i] > tol) ++numerical_rank;
  }
  throw DegenerateRankError(
      std::string(op) + ": sigma_" + std::to_string(r) +
          " is numerically zero (numerical rank " +
          std::to_string(numerical_rank) + ")",
      numerical_rank);
}

}  // namespace

SpectrumSummary spectrum(const Matrix& a) {
  require_finite(a, "spectrum: input");
  SpectrumSummary out;
  out.singular_values = singular_values_of(a);
  if (!out.singular_values.empty()) {
    const double tol =
        rank_tolerance(a.rows(), a.cols(), out.singular_values.front());
    for (double s : out.singular_values) {
      if (s > tol) ++out.rank_numerical;
    }
  }
  return out;
}

TruncatedSvd svd_truncated(const Matrix& a, int k) {
  require_finite(a, "svd_truncated: input");
  check_rank_arg(a, k, "svd_truncated");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TruncatedSvd out;
  out.u = svd.matrixU().leftCols(k);
  out.v = svd.matrixV().leftCols(k);
  const auto& vals = svd.singularValues();
  out.s.assign(vals.data(), vals.data() + k);
  return out;
}

double kyfan_norm(const Matrix& a, int r) {
  require_finite(a, "kyfan_norm: input");
  check_rank_arg(a, r, "kyfan_norm");
  const auto s = singular_values_of(a);
  return std::accumulate(s.begin(), s.begin() + r, 0.0);
}

double kyfan_dual_norm(const Matrix& a, int r) {
  require_finite(a, "kyfan_dual_norm: input");
  check_rank_arg(a, r, "kyfan_dual_norm");
  const auto s = singular_values_of(a);
  const double nuclear = std::accumulate(s.begin(), s.end(), 0.0);
  return std::max(s.front(), nuclear / static_cast<double>(r));
}

Matrix polar_rank_r(const Matrix& a, int r) {
  require_finite(a, "polar_rank_r: input");
  check_rank_arg(a, r, "polar_rank_r");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = rank_tolerance(a.rows(), a.cols(), s(0));
  if (s(r - 1) <= tol) {
    throw_degenerate(s, tol, r, "polar_rank_r");
  }
  return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).transpose();
}

namespace {

double projector_diff_opnorm(const Matrix& u1, const Matrix& u2,
                             const std::string& op) {
  require_orthonormal_columns(u1, 1e-8, op + ": first basis");
  require_orthonormal_columns(u2, 1e-8, op + ": second basis");
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) {
    throw ShapeError(op + ": bases must have equal shapes");
  }
  // For equidimensional orthonormal bases the operator norm of the
  // projector difference equals sin of the largest principal angle, which
  // is the top singular value of (I - P1) U2. Computing the residual
  // directly stays accurate for nearly identical subspaces, where the
  // cosine route would cancel. Taking the max of both orderings keeps the
  // result exactly symmetric.
  const auto residual_sine = [](const Matrix& a, const Matrix& b) {
    const Matrix residual = b - a * (a.transpose() * b);
    Eigen::BDCSVD<Matrix> svd(residual);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  };
  const double sine = std::max(residual_sine(u1, u2), residual_sine(u2, u1));
  return std::clamp(sine, 0.0, 1.0);
}

}  // namespace

double principal_angle_max(const Matrix& u1, const Matrix& u2) {
  return std::asin(projector_diff_opnorm(u1, u2, "principal_angle_max"));
}

double projector_error(const Matrix& u, const Matrix& uref) {
  return projector_diff_opnorm(u, uref, "projector_error");
}

double condition_at_rank(const Matrix& a, int r) {
  require_finite(a, "condition_at_rank: input");
  check_rank_arg(a, r, "condition_at_rank");
  const auto s = singular_values_of(a);
  const double tol = rank_tolerance(a.rows(), a.cols(), s.front());
  if (s[r - 1] <= tol) {
    throw_degenerate(s, tol, r, "condition_at_rank");
  }
  return s.front() / s[r - 1];
}

double spectral_ratio(const Matrix& a, int r) {
  require_finite(a, "spectral_ratio: input");
  const Index kmax = std::min(a.rows(), a.cols());
  if (r < 1 || r + 1 > kmax) {
    throw RangeError("spectral_ratio: need 1 <= r and r+1 <= min(m,n)");
  }
  const auto s = singular_values_of(a);
  const double tol = rank_tolerance(a.rows(), a.cols(), s.front());
  if (s[r - 1] <= tol) {
    throw_degenerate(s, tol, r, "spectral_ratio");
  }
  return s[r] / s[r - 1];
}

}  // namespace lrs
