#pragma once

// Quadratic variation of a centered Gaussian process on [0, 1] as a
// second-chaos element. With increment covariance C = U diag(nu) U^T,
// V_n = sum_k (X_{(k+1)/n} - X_{k/n})^2 has the law of sum_i nu_i N_i^2, so
// F_n = (V_n - E V_n) / sd(V_n) has spectrum nu_i / sqrt(2 sum nu^2).

#include <optional>
#include <vector>

#include "chaos/criterion.hpp"
#include "chaos/spectral.hpp"

namespace chaos {

struct FbmSpec {
  double hurst = 0.5;
  std::size_t n = 1;

  void validate() const;
};

/// Covariance of the n increments of fractional Brownian motion on the grid k/n.
SymmetricKernel fbm_increment_covariance(const FbmSpec& spec);

/// Spectrum of the normalized quadratic variation for an arbitrary increment
/// covariance. Throws InputError when the covariance is identically zero.
Spectrum qv_spectrum(const SymmetricKernel& increment_covariance);
Spectrum qv_spectrum(const FbmSpec& spec);

struct QvStudy {
  double hurst = 0.5;
  std::vector<std::size_t> sizes;
  std::vector<Spectrum> spectra;
  /// kappa_2..kappa_6 of F_n per size; cumulant_trajectories[i][r - 2].
  std::vector<std::vector<double>> cumulant_trajectories;
  std::optional<CriterionReport> report;
};

QvStudy qv_study(double hurst, const std::vector<std::size_t>& sizes,
                 const std::optional<LimitTarget>& target, double tol);

}  // namespace chaos
