#include "lrs/matrix.hpp"

#include <cmath>
#include <limits>

namespace lrs {

double rank_tolerance(Index rows, Index cols, double sigma_max) {
  const double dim = static_cast<double>(std::max(rows, cols));
  return dim * std::numeric_limits<double>::epsilon() * sigma_max;
}

void require_finite(const Matrix& a, const std::string& name) {
  if (!a.allFinite()) {
    throw ValidationError(name + ": entries must be finite");
  }
}

void require_shape(const Matrix& a, Index rows, Index cols, const std::string& name) {
  if (a.rows() != rows || a.cols() != cols) {
    throw ShapeError(name + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()));
  }
}

double orthonormality_defect(const Matrix& u) {
  Matrix gram = u.transpose() * u;
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

void require_orthonormal_columns(const Matrix& u, double tol, const std::string& name) {
  require_finite(u, name);
  if (u.cols() > u.rows()) {
    throw ShapeError(name + ": cannot have more orthonormal columns than rows");
  }
  if (orthonormality_defect(u) > tol) {
    throw ValidationError(name + ": columns are not orthonormal within " +
                          std::to_string(tol));
  }
}

}  // namespace lrs
