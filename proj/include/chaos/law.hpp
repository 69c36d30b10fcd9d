#pragma once

// Limit laws of second-chaos sequences: mu0 * Z + sum_k lambda_k (Z_k^2 - 1)
// with Z Gaussian (classical) or semicircular and freely independent (free).

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "chaos/cumulant.hpp"
#include "chaos/rng.hpp"

namespace chaos {

class SecondChaosLaw {
 public:
  /// Throws InputError on negative mu0 or non-finite eigenvalues. The zero
  /// law (mu0 = 0, no nonzero eigenvalue) is allowed and reported by is_zero().
  SecondChaosLaw(Flavor flavor, double mu0, std::vector<double> eigenvalues);

  Flavor flavor() const noexcept { return flavor_; }
  double mu0() const noexcept { return mu0_; }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  bool is_zero() const noexcept;

  /// Order-2 cumulant in the law's own flavor.
  double variance() const noexcept;
  CumulantVector cumulants(int r_max) const;

 private:
  Flavor flavor_;
  double mu0_;
  std::vector<double> eigenvalues_;
};

/// E[exp(itF)] for a classical law, evaluated in log space.
std::complex<double> char_function(const SecondChaosLaw& law, double t);
/// log E[exp(itF)] on the principal branch (continuous in t because
/// Re(1 - 2 i lambda t) = 1).
std::complex<double> log_char_function(const SecondChaosLaw& law, double t);

struct InversionResult {
  double value = 0.0;
  /// Integration upper limit (in units of the law's standard deviation).
  double truncation = 0.0;
  /// Set when the integrand did not decay below threshold before the cap, or
  /// the raw value had to be clamped into range.
  bool precision_warning = false;
};

/// Gil-Pelaez inversion of the characteristic function.
InversionResult cdf(const SecondChaosLaw& law, double x);
/// Fourier inversion of the characteristic function.
InversionResult pdf(const SecondChaosLaw& law, double x);

/// n exact draws of mu0 N_0 + sum lambda_k (N_k^2 - 1).
std::vector<double> sample_classical(const SecondChaosLaw& law, std::size_t n, Rng& rng);

/// Eigenvalues of mu0 G_0 + sum lambda_k (G_k^2 - I) for independent GUE
/// matrices of size matrix_dim, normalized to a unit-variance semicircle.
std::vector<double> sample_free_spectrum(const SecondChaosLaw& law, std::size_t matrix_dim, Rng& rng);

/// Two-sided Kolmogorov-Smirnov distance between the empirical cdf of
/// `samples` and `cdf_fn`.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf_fn);

/// Asymptotic two-sided Kolmogorov critical value sqrt(-log(alpha/2)/2)/sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

}  // namespace chaos
