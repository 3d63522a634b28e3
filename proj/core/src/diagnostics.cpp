#include "lrs/diagnostics.hpp"

#include <cmath>
#include <string>

#include "lrs/spectral.hpp"

namespace lrs {

double measure_nu(const Matrix& d, int r) {
  return kyfan_dual_norm(d, r);
}

double measure_defect(const Matrix& m, const Matrix& d, int r) {
  if (m.rows() != d.rows() || m.cols() != d.cols()) {
    throw ShapeError("measure_defect: shapes differ");
  }
  return kyfan_norm(m, r) - m.cwiseProduct(d).sum();
}

double measure_persistence(const Matrix& g_out_now, const Matrix& g_out_prev) {
  if (g_out_now.rows() != g_out_prev.rows() ||
      g_out_now.cols() != g_out_prev.cols()) {
    throw ShapeError("measure_persistence: shapes differ");
  }
  const double norm_now = g_out_now.norm();
  const double norm_prev = g_out_prev.norm();
  if (norm_now < 1e-14 || norm_prev < 1e-14) {
    return 0.0;
  }
  const double cosine =
      g_out_now.cwiseProduct(g_out_prev).sum() / (norm_now * norm_prev);
  return std::clamp(cosine, -1.0, 1.0);
}

SuffixCheckResult check_suffix_contraction(std::span<const double> rhos,
                                           double rho_bar, double c) {
  if (rho_bar <= 0.0 || rho_bar >= 1.0) {
    throw RangeError("check_suffix_contraction: rho_bar must be in (0, 1)");
  }
  if (c < 1.0) {
    throw RangeError("check_suffix_contraction: c must be >= 1");
  }
  for (double rho : rhos) {
    if (!(rho > 0.0)) {
      throw ValidationError("check_suffix_contraction: all rho_i must be > 0");
    }
  }
  const int n = static_cast<int>(rhos.size());
  // Prefix sums of log rho; condition becomes
  // prefix[t] - prefix[s] <= log(c) + (t - s) log(rho_bar).
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + std::log(rhos[i]);
  }
  const double log_c = std::log(c);
  const double log_bar = std::log(rho_bar);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t <= n; ++t) {
      if (prefix[t] - prefix[s] > log_c + (t - s) * log_bar) {
        return SuffixCheckResult{false, s, t};
      }
    }
  }
  return SuffixCheckResult{};
}

ContractionCeilings contraction_ceilings(int r, double kappa) {
  if (r < 1) {
    throw RangeError("contraction_ceilings: r must be >= 1");
  }
  if (kappa < 1.0) {
    throw RangeError("contraction_ceilings: kappa must be >= 1");
  }
  ContractionCeilings out{};
  const double rank_factor = 2.0 * std::sqrt(2.0 * static_cast<double>(r));
  out.original = 1.0 / (1.0 + rank_factor * kappa);
  out.ours = 1.0 / (1.0 + kappa);
  out.relaxation = rank_factor;
  return out;
}

double implicit_momentum_coeff(double eps_hat) {
  if (eps_hat < 0.0 || eps_hat > 1.0) {
    throw RangeError("implicit_momentum_coeff: eps_hat must be in [0, 1]");
  }
  return eps_hat * eps_hat;
}

CostRatios smoothness_coupling_ratios(int r) {
  if (r < 1) {
    throw RangeError("smoothness_coupling_ratios: r must be >= 1");
  }
  const double rd = static_cast<double>(r);
  return CostRatios{rd, (1.0 + std::sqrt(rd)) / 2.0};
}

}  // namespace lrs
