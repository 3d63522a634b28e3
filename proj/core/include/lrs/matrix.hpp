#pragma once

#include <Eigen/Dense>

#include <string>

#include "lrs/errors.hpp"

namespace lrs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Single audited source of tolerances. kTolOrtho guards orthonormality
// checks, kTolRel spectral comparisons.
inline constexpr double kTolOrtho = 1e-10;
inline constexpr double kTolRel = 1e-8;

/// Numerical-rank threshold: sigma_i counts toward rank iff
/// sigma_i > max(m,n) * eps * sigma_1.
double rank_tolerance(Index rows, Index cols, double sigma_max);

/// Throws ValidationError if any entry of `a` is NaN or infinite.
void require_finite(const Matrix& a, const std::string& name);

/// Throws ShapeError unless `a` is rows x cols.
void require_shape(const Matrix& a, Index rows, Index cols, const std::string& name);

/// Throws ValidationError unless the columns of `u` are orthonormal
/// within `tol` (max abs deviation of u^T u from identity).
void require_orthonormal_columns(const Matrix& u, double tol, const std::string& name);

/// Max abs deviation of u^T u from the identity.
double orthonormality_defect(const Matrix& u);

}  // namespace lrs
