#pragma once

#include "lrs/matrix.hpp"
#include "lrs/rng.hpp"

namespace lrs {

/// Result of `orth`. `degenerate` is set when rank-deficient directions had
/// to be completed with seeded random columns.
struct OrthResult {
  Matrix q;
  bool degenerate = false;
};

/// Factor pair produced by one half step of subspace iteration:
/// orthonormal left factor and the un-normalized right factor w = m^T u.
struct PowerIterResult {
  Matrix u;
  Matrix w;
  bool degenerate = false;
};

/// Rescales each column of `w` to unit 2-norm. Columns whose norm falls
/// below kTolOrtho times the largest column norm are returned as zero.
/// Preserves the column space; does not orthogonalize.
Matrix colnorm(const Matrix& w);

/// Orthonormalizes the columns of `w` by modified Gram-Schmidt with one
/// re-orthogonalization pass. Signs are fixed so the implicit triangular
/// factor has non-negative diagonal. Directions whose residual norm falls
/// below sqrt(eps) * ||w||_F are replaced by seeded random vectors
/// orthogonalized against the accepted columns, and the result is flagged
/// degenerate.
OrthResult orth(const Matrix& w, Rng& rng);

/// One half step of subspace iteration: u = orth(m * v_prev), w = m^T u.
PowerIterResult power_iter_half(const Matrix& m, const Matrix& v_prev, Rng& rng);

/// Seeded random matrix with orthonormal columns.
Matrix random_orthonormal(Index rows, Index cols, Rng& rng);

}  // namespace lrs
