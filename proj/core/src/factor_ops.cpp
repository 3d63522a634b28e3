#include "lrs/factor_ops.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lrs {

Matrix colnorm(const Matrix& w) {
  require_finite(w, "colnorm: input");
  Matrix out = w;
  double max_norm = 0.0;
  for (Index j = 0; j < w.cols(); ++j) {
    max_norm = std::max(max_norm, w.col(j).norm());
  }
  const double threshold = kTolOrtho * max_norm;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm > threshold) {
      out.col(j) /= norm;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

namespace {

// Subtract the projection onto the already-accepted columns q_0..q_{count-1}.
void project_out(const Matrix& q, Index count, Vector& v) {
  for (Index i = 0; i < count; ++i) {
    v -= q.col(i).dot(v) * q.col(i);
  }
}

}  // namespace

OrthResult orth(const Matrix& w, Rng& rng) {
  require_finite(w, "orth: input");
  if (w.cols() > w.rows()) {
    throw ShapeError("orth: more columns than rows, no orthonormal basis exists");
  }
  const double deficiency_threshold =
      std::sqrt(std::numeric_limits<double>::epsilon()) * w.norm();

  OrthResult result;
  result.q = Matrix::Zero(w.rows(), w.cols());
  for (Index j = 0; j < w.cols(); ++j) {
    Vector v = w.col(j);
    project_out(result.q, j, v);
    project_out(result.q, j, v);  // second pass restores full orthogonality
    double norm = v.norm();
    if (norm <= deficiency_threshold) {
      result.degenerate = true;
      // Completion rule: seeded random direction, orthogonalized against the
      // accepted columns. Retry until it survives the projection.
      do {
        v = rng.gaussian_matrix(w.rows(), 1);
        project_out(result.q, j, v);
        project_out(result.q, j, v);
        norm = v.norm();
      } while (norm <= std::sqrt(std::numeric_limits<double>::epsilon()) *
                           std::sqrt(static_cast<double>(w.rows())));
    }
    result.q.col(j) = v / norm;
  }
  return result;
}

PowerIterResult power_iter_half(const Matrix& m, const Matrix& v_prev, Rng& rng) {
  if (v_prev.rows() != m.cols()) {
    throw ShapeError("power_iter_half: v_prev has " +
                     std::to_string(v_prev.rows()) + " rows, expected " +
                     std::to_string(m.cols()));
  }
  if (v_prev.cols() > std::min(m.rows(), m.cols())) {
    throw ShapeError("power_iter_half: rank exceeds min(m, n)");
  }
  PowerIterResult result;
  OrthResult left = orth(m * v_prev, rng);
  result.u = std::move(left.q);
  result.degenerate = left.degenerate;
  result.w = m.transpose() * result.u;
  return result;
}

Matrix random_orthonormal(Index rows, Index cols, Rng& rng) {
  return orth(rng.gaussian_matrix(rows, cols), rng).q;
}

}  // namespace lrs
