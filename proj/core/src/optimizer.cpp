#include "lrs/optimizer.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

#include "lrs/adarank.hpp"
#include "lrs/factor_ops.hpp"
#include "lrs/spectral.hpp"

namespace lrs {

namespace {

void check_step_inputs(const LayerOptState& state, const Matrix& g) {
  require_finite(g, "step: gradient");
  if (g.rows() != state.x.rows() || g.cols() != state.x.cols()) {
    throw ShapeError("step: gradient shape does not match parameter");
  }
  if (state.r.rows() != state.x.rows() || state.r.cols() != state.x.cols()) {
    throw ShapeError("step: residual shape does not match parameter");
  }
  if (state.v.rows() != state.x.cols() ||
      state.v.cols() != static_cast<Index>(state.rank)) {
    throw ShapeError("step: warm-start factor must be n x rank");
  }
  if (state.rank < 1 ||
      state.rank > std::min(state.x.rows(), state.x.cols())) {
    throw RangeError("step: rank outside [1, min(m, n)]");
  }
}

/// Dual norm of U vbar^T with orthonormal U, from the singular values of
/// the right factor alone.
double nu_from_right_factor(const Matrix& vbar, int rank) {
  Eigen::BDCSVD<Matrix> svd(vbar);
  const auto& s = svd.singularValues();
  double nuclear = 0.0;
  for (Index i = 0; i < s.size(); ++i) nuclear += s(i);
  const double top = s.size() > 0 ? s(0) : 0.0;
  return std::max(top, nuclear / static_cast<double>(rank));
}

StepDiagnostics compute_diagnostics(const Matrix& buffer, const Matrix& g,
                                    const Matrix& residual_in, const Matrix& u,
                                    const Matrix& vbar, const Matrix& w,
                                    int rank, DiagnosticsMode mode,
                                    bool degenerate) {
  StepDiagnostics diag;
  diag.degenerate = degenerate;
  diag.nu = nu_from_right_factor(vbar, rank);

  const double buffer_norm = buffer.norm();
  if (buffer_norm > 0.0) {
    const Matrix captured = u * (u.transpose() * buffer);
    diag.eps_hat = std::min((buffer - captured).norm() / buffer_norm, 1.0);
  }
  const double grad_norm = g.norm();
  diag.r_ratio = grad_norm > 0.0 ? residual_in.norm() / grad_norm : 0.0;
  diag.erank = w.norm() > 0.0 ? effective_rank_estimate(w) : 1.0;

  if (mode == DiagnosticsMode::fast) {
    return diag;
  }

  Eigen::BDCSVD<Matrix> svd_buffer(buffer, Eigen::ComputeThinU);
  const auto& sb = svd_buffer.singularValues();
  double kyfan_buffer = 0.0;
  for (int i = 0; i < rank; ++i) kyfan_buffer += sb(i);
  diag.delta = kyfan_buffer - buffer.cwiseProduct(u * vbar.transpose()).sum();

  const double tol_b = rank_tolerance(buffer.rows(), buffer.cols(),
                                      sb.size() > 0 ? sb(0) : 0.0);
  if (rank < std::min(buffer.rows(), buffer.cols()) && sb(rank - 1) > tol_b) {
    diag.gamma_tilde = sb(rank) / sb(rank - 1);
  }
  if (sb(0) > tol_b) {
    diag.eps_proj = projector_error(u, svd_buffer.matrixU().leftCols(rank));
  }

  Eigen::BDCSVD<Matrix> svd_grad(g, Eigen::ComputeThinU);
  const auto& sg = svd_grad.singularValues();
  if (sg(0) > 0.0) {
    diag.eps_proj_g = projector_error(u, svd_grad.matrixU().leftCols(rank));
    const double floor = std::numeric_limits<double>::epsilon() * sg(0);
    diag.kappa_g = sg(0) / std::max(sg(rank - 1), floor);
  }
  diag.rho = diag.gamma_tilde * (1.0 + diag.kappa_g);
  return diag;
}

enum class RightFactorKind { column_normalized, orthogonalized };

StepOutcome factored_step(const LayerOptState& state, const Matrix& g,
                          const Matrix& buffer, const Matrix& residual_in,
                          RightFactorKind kind, Rng& rng,
                          DiagnosticsMode mode) {
  PowerIterResult power = power_iter_half(buffer, state.v, rng);
  bool degenerate = power.degenerate;

  Matrix vbar;
  if (kind == RightFactorKind::column_normalized) {
    vbar = colnorm(power.w);
  } else {
    OrthResult res = orth(power.w, rng);
    vbar = std::move(res.q);
    degenerate = degenerate || res.degenerate;
  }

  StepOutcome out;
  out.direction = power.u * vbar.transpose();
  out.state = state;
  out.state.x = state.x - state.eta * out.direction;
  out.state.r = state.beta * (buffer - power.u * (power.u.transpose() * buffer));
  if (state.reorthogonalize_warm_start) {
    OrthResult warm = orth(vbar, rng);
    out.state.v = std::move(warm.q);
    degenerate = degenerate || warm.degenerate;
  } else {
    out.state.v = vbar;
  }
  out.diagnostics = compute_diagnostics(buffer, g, residual_in, power.u, vbar,
                                        power.w, state.rank, mode, degenerate);
  out.gradient_out_of_subspace = g - power.u * (power.u.transpose() * g);
  out.left_factor = std::move(power.u);
  out.right_factor = std::move(vbar);
  return out;
}

}  // namespace

LayerOptState make_initial_state(const Matrix& x0, int rank, double eta,
                                 double beta, double mu, Algorithm algorithm,
                                 Rng& rng) {
  require_finite(x0, "make_initial_state: x0");
  if (rank < 1 || rank > std::min(x0.rows(), x0.cols())) {
    throw RangeError("make_initial_state: rank outside [1, min(m, n)]");
  }
  LayerOptState state;
  state.x = x0;
  state.r = Matrix::Zero(x0.rows(), x0.cols());
  state.v = random_orthonormal(x0.cols(), rank, rng);
  state.rank = rank;
  state.eta = eta;
  state.beta = beta;
  state.mu = mu;
  if (algorithm == Algorithm::polyak_dion) {
    state.p = Matrix::Zero(x0.rows(), x0.cols());
  }
  return state;
}

StepOutcome dion_step(const LayerOptState& state, const Matrix& g, Rng& rng,
                      DiagnosticsMode mode) {
  check_step_inputs(state, g);
  const Matrix buffer = g + state.r;
  return factored_step(state, g, buffer, state.r,
                       RightFactorKind::column_normalized, rng, mode);
}

StepOutcome orth_dion_step(const LayerOptState& state, const Matrix& g,
                           Rng& rng, DiagnosticsMode mode) {
  check_step_inputs(state, g);
  const Matrix buffer = g + state.r;
  return factored_step(state, g, buffer, state.r,
                       RightFactorKind::orthogonalized, rng, mode);
}

StepOutcome exact_polar_step(const LayerOptState& state, const Matrix& g,
                             Rng& rng, DiagnosticsMode mode) {
  check_step_inputs(state, g);
  (void)rng;
  const Matrix buffer = g + state.r;
  Eigen::BDCSVD<Matrix> svd(buffer,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = rank_tolerance(buffer.rows(), buffer.cols(), s(0));
  if (s(state.rank - 1) <= tol) {
    int numerical_rank = 0;
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > tol) ++numerical_rank;
    }
    throw DegenerateRankError(
        "exact_polar_step: buffer is rank-deficient at the working rank",
        numerical_rank);
  }
  const Matrix u = svd.matrixU().leftCols(state.rank);
  const Matrix v = svd.matrixV().leftCols(state.rank);
  const Matrix w = buffer.transpose() * u;

  StepOutcome out;
  out.direction = u * v.transpose();
  out.state = state;
  out.state.x = state.x - state.eta * out.direction;
  out.state.r = state.beta * (buffer - u * (u.transpose() * buffer));
  out.state.v = v;
  out.diagnostics = compute_diagnostics(buffer, g, state.r, u, v, w,
                                        state.rank, mode, false);
  out.gradient_out_of_subspace = g - u * (u.transpose() * g);
  out.left_factor = u;
  out.right_factor = v;
  return out;
}

StepOutcome polyak_dion_step(const LayerOptState& state, const Matrix& g,
                             Rng& rng, DiagnosticsMode mode) {
  check_step_inputs(state, g);
  if (state.p.rows() != state.x.rows() || state.p.cols() != state.x.cols()) {
    throw ValidationError(
        "polyak_dion_step: momentum buffer not initialized for this layer");
  }
  if (state.mu < 0.0 || state.mu >= 1.0) {
    throw RangeError("polyak_dion_step: mu must be in [0, 1)");
  }
  const Matrix momentum = state.mu * state.p + g;
  // Momentum is accumulated before compression; no error feedback.
  StepOutcome out = factored_step(state, g, momentum,
                                  Matrix::Zero(g.rows(), g.cols()),
                                  RightFactorKind::orthogonalized, rng, mode);
  out.state.r = Matrix::Zero(g.rows(), g.cols());
  out.state.p = momentum;
  return out;
}

}  // namespace lrs
