#pragma once

#include <span>
#include <vector>

#include "lrs/matrix.hpp"

namespace lrs {

/// Per-step measured geometry of one optimizer step. Frobenius-cheap fields
/// are always filled; fields needing extra SVDs are zero in fast mode.
struct StepDiagnostics {
  double nu = 0.0;           // Ky Fan dual norm of the applied direction
  double delta = 0.0;        // oracle defect, signed
  double eps_proj = 0.0;     // projector error vs top-r space of the buffer
  double eps_proj_g = 0.0;   // projector error vs top-r space of the gradient
  double eps_hat = 0.0;      // Frobenius tracking error of the buffer
  double phi = 0.0;          // out-of-subspace gradient persistence
  double r_ratio = 0.0;      // ||R||_F / ||G||_F
  double gamma_tilde = 0.0;  // buffer spectral ratio sigma_{r+1}/sigma_r
  double kappa_g = 1.0;      // gradient condition at rank r
  double rho = 0.0;          // gamma_tilde * (1 + kappa_g)
  double erank = 1.0;        // spectral-entropy effective rank of W
  bool degenerate = false;   // rank-deficiency completion fired this step
};

/// Ky Fan dual norm of an update direction (equals the operator norm of the
/// right factor when the left factor is orthonormal).
double measure_nu(const Matrix& d, int r);

/// Oracle defect: kyfan_norm(m, r) - <m, d>. Signed; negative values are
/// possible for column-normalized directions.
double measure_defect(const Matrix& m, const Matrix& d, int r);

/// Cosine similarity of consecutive out-of-subspace gradient components,
/// in [-1, 1]. Returns 0 when either norm is below 1e-14.
double measure_persistence(const Matrix& g_out_now, const Matrix& g_out_prev);

/// Outcome of the suffix-product contraction check. When `ok` is false,
/// (s, t) is the first violating window in scan order (increasing s, then t).
struct SuffixCheckResult {
  bool ok = true;
  int s = -1;
  int t = -1;
};

/// Verifies prod_{i=s}^{t-1} rho_i <= c * rho_bar^(t-s) for all 0 <= s < t,
/// exhaustively in log space. Empty input passes vacuously.
SuffixCheckResult check_suffix_contraction(std::span<const double> rhos,
                                           double rho_bar, double c);

/// Admissibility ceilings on the buffer spectral ratio.
struct ContractionCeilings {
  double original;    // 1 / (1 + 2 sqrt(2r) kappa)
  double ours;        // 1 / (1 + kappa)
  double relaxation;  // asymptotic ratio of the two ceilings, 2 sqrt(2r)
};

ContractionCeilings contraction_ceilings(int r, double kappa);

/// Heavy-ball coefficient equivalent to the residual random walk: eps_hat^2.
double implicit_momentum_coeff(double eps_hat);

/// Rank-dependent cost ratios of column normalization at its worst case:
/// smoothness ratio r and residual coupling ratio (1 + sqrt(r)) / 2.
struct CostRatios {
  double smoothness;
  double coupling;
};

CostRatios smoothness_coupling_ratios(int r);

}  // namespace lrs
