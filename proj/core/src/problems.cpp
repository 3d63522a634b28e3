#include "lrs/problems.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrs/factor_ops.hpp"

namespace lrs {

void validate(const ProblemSpec& spec) {
  if (spec.m < 1 || spec.n < 1) {
    throw ValidationError("problem: m and n must be positive");
  }
  if (spec.target_spectrum.empty()) {
    throw ValidationError("problem.target_spectrum: must be non-empty");
  }
  if (static_cast<Index>(spec.target_spectrum.size()) >
      std::min<Index>(spec.m, spec.n)) {
    throw ValidationError("problem.target_spectrum: longer than min(m, n)");
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double s : spec.target_spectrum) {
    if (s < 0.0 || !std::isfinite(s)) {
      throw ValidationError("problem.target_spectrum: values must be finite and >= 0");
    }
    if (s > prev) {
      throw ValidationError("problem.target_spectrum: must be non-increasing");
    }
    prev = s;
  }
  if (spec.gap_index < 1 ||
      spec.gap_index > static_cast<int>(spec.target_spectrum.size())) {
    throw ValidationError("problem.gap_index: outside [1, len(spectrum)]");
  }
  if (spec.noise_scale < 0.0 || !std::isfinite(spec.noise_scale)) {
    throw ValidationError("problem.noise_scale: must be finite and >= 0");
  }
  if (spec.tail < 0.0 || !std::isfinite(spec.tail)) {
    throw ValidationError("problem.tail: must be finite and >= 0");
  }
}

PlantedQuadratic::PlantedQuadratic(Vector scale_left, Vector scale_right,
                                   Matrix x_star, Matrix x0)
    : scale_left_(std::move(scale_left)),
      scale_right_(std::move(scale_right)),
      x_star_(std::move(x_star)),
      x0_(std::move(x0)) {
  if (x_star_.rows() != scale_left_.size() ||
      x_star_.cols() != scale_right_.size()) {
    throw ShapeError("PlantedQuadratic: scaling sizes do not match x_star");
  }
  if (x0_.rows() != x_star_.rows() || x0_.cols() != x_star_.cols()) {
    throw ShapeError("PlantedQuadratic: x0 and x_star shapes differ");
  }
  if ((scale_left_.array() <= 0.0).any() || (scale_right_.array() <= 0.0).any()) {
    throw ValidationError("PlantedQuadratic: diagonal scalings must be positive");
  }
}

PlantedQuadratic PlantedQuadratic::from_spec(const ProblemSpec& spec) {
  validate(spec);
  if (spec.kind != ProblemKind::planted_quadratic) {
    throw ValidationError("PlantedQuadratic::from_spec: kind mismatch");
  }
  Rng rng(spec.seed);
  Rng frame_rng = rng.fork("quadratic-frames");
  Rng scale_rng = rng.fork("quadratic-scales");
  Rng start_rng = rng.fork("quadratic-start");

  // Mild diagonal curvature; entries in [0.75, 1.25] keep the Hessian well
  // conditioned while making it non-trivial.
  Vector scale_left(spec.m);
  for (Index i = 0; i < spec.m; ++i) {
    scale_left(i) = 0.75 + 0.5 * scale_rng.uniform();
  }
  Vector scale_right(spec.n);
  for (Index j = 0; j < spec.n; ++j) {
    scale_right(j) = 0.75 + 0.5 * scale_rng.uniform();
  }

  const int k = static_cast<int>(spec.target_spectrum.size());
  const Matrix p = random_orthonormal(spec.m, k, frame_rng);
  const Matrix q = random_orthonormal(spec.n, k, frame_rng);
  Vector sigma(k);
  for (int i = 0; i < k; ++i) sigma(i) = spec.target_spectrum[i];

  const Matrix x_star = start_rng.gaussian_matrix(spec.m, spec.n);
  // grad(X) = A_L^2 (X - X*) A_R^2, so placing
  // X0 = X* + A_L^{-2} P diag(sigma) Q^T A_R^{-2}
  // makes grad(X0) = P diag(sigma) Q^T with the planted spectrum.
  const Matrix planted = p * sigma.asDiagonal() * q.transpose();
  const Vector inv_left = scale_left.array().square().inverse();
  const Vector inv_right = scale_right.array().square().inverse();
  const Matrix x0 =
      x_star + inv_left.asDiagonal() * planted * inv_right.asDiagonal();
  return PlantedQuadratic(std::move(scale_left), std::move(scale_right),
                          x_star, x0);
}

double PlantedQuadratic::value(const Matrix& x) const {
  require_shape(x, x_star_.rows(), x_star_.cols(), "PlantedQuadratic::value: x");
  const Matrix scaled = scale_left_.asDiagonal() * (x - x_star_) *
                        scale_right_.asDiagonal();
  return 0.5 * scaled.squaredNorm();
}

Matrix PlantedQuadratic::gradient(const Matrix& x) const {
  require_shape(x, x_star_.rows(), x_star_.cols(),
                "PlantedQuadratic::gradient: x");
  return scale_left_.array().square().matrix().asDiagonal() * (x - x_star_) *
         scale_right_.array().square().matrix().asDiagonal();
}

SmoothnessCertificate PlantedQuadratic::certificate(int rank) const {
  if (rank < 1) {
    throw RangeError("PlantedQuadratic::certificate: rank must be >= 1");
  }
  const double max_left = scale_left_.maxCoeff();
  const double max_right = scale_right_.maxCoeff();
  const double l_f = max_left * max_left * max_right * max_right;
  return SmoothnessCertificate{
      static_cast<double>(rank) * l_f, l_f,
      "L_F = (max diag A_L)^2 (max diag A_R)^2; L_r = r * L_F via "
      "||D||_F <= sqrt(r) * dual norm for rank-r directions"};
}

GradientStream GradientStream::from_spec(const ProblemSpec& spec) {
  validate(spec);
  if (spec.kind != ProblemKind::gradient_stream) {
    throw ValidationError("GradientStream::from_spec: kind mismatch");
  }
  Rng frame_rng = Rng(spec.seed).fork("stream-frames");

  GradientStream stream;
  stream.regime_ = spec.regime;
  stream.noise_scale_ = spec.noise_scale;
  const int k = static_cast<int>(spec.target_spectrum.size());
  stream.left_frame_ = random_orthonormal(spec.m, k, frame_rng);
  stream.right_frame_ = random_orthonormal(spec.n, k, frame_rng);
  Vector sigma(k);
  for (int i = 0; i < k; ++i) sigma(i) = spec.target_spectrum[i];
  stream.signal_ =
      stream.left_frame_ * sigma.asDiagonal() * stream.right_frame_.transpose();
  return stream;
}

Matrix GradientStream::sample_noise(Rng& rng, double scale) const {
  Matrix noise = rng.gaussian_matrix(signal_.rows(), signal_.cols());
  // Project off the planted column space so the noise is exactly
  // out-of-subspace, then fix the Frobenius norm.
  noise -= left_frame_ * (left_frame_.transpose() * noise);
  const double norm = noise.norm();
  if (norm > 0.0 && scale > 0.0) {
    noise *= scale / norm;
  } else {
    noise.setZero();
  }
  return noise;
}

Matrix GradientStream::next(Rng& rng) {
  if (noise_scale_ == 0.0) {
    return signal_;
  }
  Matrix noise;
  switch (regime_) {
    case Regime::coherent:
      if (!has_prev_) {
        noise_prev_ = sample_noise(rng, noise_scale_);
        has_prev_ = true;
      }
      noise = noise_prev_;
      break;
    case Regime::stochastic:
      noise = sample_noise(rng, noise_scale_);
      break;
    case Regime::anticorrelated:
      if (!has_prev_) {
        noise = sample_noise(rng, noise_scale_);
      } else {
        // Negate the previous term; the small fresh component keeps the
        // sequence from being exactly period-2.
        noise = -noise_prev_ + sample_noise(rng, 0.05 * noise_scale_);
      }
      noise_prev_ = noise;
      has_prev_ = true;
      break;
  }
  return signal_ + noise;
}

bool AssumptionReport::all_hold() const {
  auto all = [](const std::vector<bool>& v) {
    return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
  };
  return all(gap_holds) && all(tail_holds) && all(bound_holds);
}

AssumptionReport verify_assumptions(const ProblemSpec& spec,
                                    std::span<const Matrix> gradients) {
  const auto& s = spec.target_spectrum;
  const int r = spec.gap_index;
  const double sigma_next =
      r < static_cast<int>(s.size()) ? s[static_cast<std::size_t>(r)] : 0.0;
  const double gap = s[static_cast<std::size_t>(r - 1)] - sigma_next;
  double signal_sq = 0.0;
  for (double v : s) signal_sq += v * v;
  const double bound =
      std::sqrt(signal_sq + spec.noise_scale * spec.noise_scale);
  return verify_assumptions(spec, gradients, gap, spec.tail, bound);
}

AssumptionReport verify_assumptions(const ProblemSpec& spec,
                                    std::span<const Matrix> gradients,
                                    double gap_threshold, double tail_threshold,
                                    double frobenius_bound) {
  const int r = spec.gap_index;
  AssumptionReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (const Matrix& g : gradients) {
    Eigen::JacobiSVD<Matrix> svd(g);
    const auto& sv = svd.singularValues();
    const double sigma_r = sv(r - 1);
    const double sigma_next = r < sv.size() ? sv(r) : 0.0;
    const double gap = sigma_r - sigma_next;
    const double frob = g.norm();
    report.gap_holds.push_back(gap >= gap_threshold - 1e-12);
    report.tail_holds.push_back(sigma_next <= tail_threshold + 1e-12);
    report.bound_holds.push_back(frob <= frobenius_bound + 1e-12);
    report.min_gap = std::min(report.min_gap, gap);
    report.max_tail = std::max(report.max_tail, sigma_next);
    report.max_frobenius = std::max(report.max_frobenius, frob);
  }
  if (gradients.empty()) {
    report.min_gap = 0.0;
  }
  return report;
}

}  // namespace lrs
