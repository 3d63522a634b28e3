#pragma once

#include "lrs/diagnostics.hpp"
#include "lrs/matrix.hpp"
#include "lrs/rng.hpp"

namespace lrs {

enum class Algorithm { dion, orth_dion, ada_orth_dion, exact_polar, polyak_dion };

enum class DiagnosticsMode { full, fast };

/// Per-layer optimizer state. The momentum buffer `p` is used only by
/// polyak_dion; it stays empty for the other algorithms.
struct LayerOptState {
  Matrix x;          // parameter, m x n
  Matrix r;          // error-feedback residual, m x n
  Matrix v;          // warm-start right factor, n x rank, orthonormal
  int rank = 1;
  double eta = 0.0;  // step size
  double beta = 1.0; // error-feedback coefficient, in [0, 1]
  double mu = 0.0;   // explicit momentum coefficient, in [0, 1)
  Matrix p;          // momentum buffer (polyak_dion only)
  // When true (default) the stored warm-start factor is re-orthogonalized,
  // so the next power step always starts from a well-conditioned basis.
  // When false the raw right factor is stored, matching the unmodified
  // update rule; the spans are identical either way.
  bool reorthogonalize_warm_start = true;
};

/// Result of one optimizer step.
struct StepOutcome {
  LayerOptState state;
  Matrix direction;                  // the applied update D, rank <= rank
  StepDiagnostics diagnostics;
  Matrix left_factor;                // U, m x rank, orthonormal
  Matrix right_factor;               // normalized right factor
  Matrix gradient_out_of_subspace;   // (I - U U^T) G, for persistence
};

/// Fresh state: X = x0, R = 0, seeded random orthonormal V, zero momentum
/// buffer when the algorithm needs one.
LayerOptState make_initial_state(const Matrix& x0, int rank, double eta,
                                 double beta, double mu, Algorithm algorithm,
                                 Rng& rng);

/// One step of the column-normalized low-rank spectral update:
/// M = G + R, one power half-step, right factor by column normalization.
StepOutcome dion_step(const LayerOptState& state, const Matrix& g, Rng& rng,
                      DiagnosticsMode mode = DiagnosticsMode::full);

/// Same as dion_step except the right factor is QR-orthogonalized, which
/// pins the dual norm of the update at 1.
StepOutcome orth_dion_step(const LayerOptState& state, const Matrix& g,
                           Rng& rng,
                           DiagnosticsMode mode = DiagnosticsMode::full);

/// Exact rank-r spectral baseline: the update is the rank-r polar factor of
/// the buffer from a truncated SVD; error feedback uses the top-r left
/// singular vectors.
StepOutcome exact_polar_step(const LayerOptState& state, const Matrix& g,
                             Rng& rng,
                             DiagnosticsMode mode = DiagnosticsMode::full);

/// Explicit heavy-ball variant: P <- mu P + G, then the QR-normalized
/// factor step runs on P with the residual pinned at zero.
StepOutcome polyak_dion_step(const LayerOptState& state, const Matrix& g,
                             Rng& rng,
                             DiagnosticsMode mode = DiagnosticsMode::full);

}  // namespace lrs
