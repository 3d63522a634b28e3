#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrs/matrix.hpp"
#include "lrs/rng.hpp"

namespace lrs {

enum class ProblemKind { planted_quadratic, gradient_stream };

/// Cross-step correlation regime of the out-of-subspace noise.
enum class Regime { coherent, stochastic, anticorrelated };

/// Definition of a synthetic objective or gradient stream with a
/// controllable singular spectrum.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::planted_quadratic;
  int m = 0;
  int n = 0;
  std::vector<double> target_spectrum;  // non-increasing, >= 0
  int gap_index = 1;                    // rank at which the gap is asserted
  double tail = 0.0;                    // asserted bound on sigma_{r+1}
  Regime regime = Regime::stochastic;   // streams only
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
};

/// Throws ValidationError if the spec violates its invariants.
void validate(const ProblemSpec& spec);

/// Certified smoothness constants of a synthetic objective.
struct SmoothnessCertificate {
  double l_r;               // curvature along rank-r directions
  double l_f;               // Frobenius gradient-Lipschitz constant
  std::string derivation;
};

/// Quadratic f(X) = 1/2 ||A_L (X - X*) A_R||_F^2 with diagonal scalings,
/// constructed so the gradient at the starting point has a prescribed
/// singular spectrum. The gradient is closed form and the curvature
/// certificate is exact: L_F = (max A_L)^2 (max A_R)^2, L_r = r L_F.
class PlantedQuadratic {
 public:
  PlantedQuadratic(Vector scale_left, Vector scale_right, Matrix x_star,
                   Matrix x0);

  /// Seeded construction from a spec: mild random diagonal scalings and a
  /// starting point placed so grad(x0) has exactly spec.target_spectrum as
  /// its singular values.
  static PlantedQuadratic from_spec(const ProblemSpec& spec);

  double value(const Matrix& x) const;
  Matrix gradient(const Matrix& x) const;
  SmoothnessCertificate certificate(int rank) const;
  const Matrix& initial_point() const { return x0_; }
  const Matrix& minimizer() const { return x_star_; }

 private:
  Vector scale_left_;   // diagonal of A_L
  Vector scale_right_;  // diagonal of A_R
  Matrix x_star_;
  Matrix x0_;
};

/// Stream of gradients G_t = P diag(spectrum) Q^T + xi_t with fixed seeded
/// frames P, Q and out-of-subspace noise xi_t following the configured
/// regime. The noise is projected off col(P) exactly, so the persistence
/// of consecutive noise terms is what the regime prescribes.
class GradientStream {
 public:
  static GradientStream from_spec(const ProblemSpec& spec);

  Matrix next(Rng& rng);

  const Matrix& left_frame() const { return left_frame_; }
  const Matrix& right_frame() const { return right_frame_; }
  const Matrix& signal() const { return signal_; }

 private:
  GradientStream() = default;

  Matrix sample_noise(Rng& rng, double scale) const;

  Regime regime_ = Regime::stochastic;
  double noise_scale_ = 0.0;
  Matrix left_frame_;   // m x k
  Matrix right_frame_;  // n x k
  Matrix signal_;       // P diag(spectrum) Q^T
  Matrix noise_prev_;   // last emitted noise term
  bool has_prev_ = false;
};

/// Per-step assumption checks over a recorded gradient trajectory.
struct AssumptionReport {
  std::vector<bool> gap_holds;    // sigma_r - sigma_{r+1} >= gap_threshold
  std::vector<bool> tail_holds;   // sigma_{r+1} <= tail_threshold
  std::vector<bool> bound_holds;  // ||G||_F <= frobenius_bound
  double min_gap = 0.0;
  double max_tail = 0.0;
  double max_frobenius = 0.0;
  bool all_hold() const;
};

/// Evaluates the gap, tail, and norm-bound conditions at rank
/// spec.gap_index for every gradient in the trajectory. Thresholds default
/// to the values the spec plants: gap = spectrum[r-1] - spectrum[r],
/// tail = spec.tail, bound = sqrt(sum spectrum^2 + noise_scale^2).
AssumptionReport verify_assumptions(const ProblemSpec& spec,
                                    std::span<const Matrix> gradients);

AssumptionReport verify_assumptions(const ProblemSpec& spec,
                                    std::span<const Matrix> gradients,
                                    double gap_threshold, double tail_threshold,
                                    double frobenius_bound);

}  // namespace lrs
