#pragma once

// Classical and free cumulants of second-chaos elements.
//
// For F = N + sum_k lambda_k (N_k^2 - 1) with N ~ N(0, sd^2) independent,
//   kappa_2 = sd^2 + 2 sum lambda^2,   kappa_r = 2^{r-1} (r-1)! sum lambda^r  (r >= 3).
// For the free analogue A + sum_k lambda_k (S_k^2 - 1) with A semicircular,
//   kappa_2 = sd^2 + sum lambda^2,     kappa_r = sum lambda^r                  (r >= 3).
// The Gaussian/semicircular component only ever touches order 2, and it is
// added here so callers never special-case it.

#include <span>
#include <string_view>
#include <vector>

#include "chaos/spectral.hpp"

namespace chaos {

enum class Flavor { classical, free };

std::string_view to_string(Flavor f) noexcept;
Flavor parse_flavor(std::string_view s);

/// kappa_1..kappa_rmax. Index 0 is unused and held at zero.
class CumulantVector {
 public:
  CumulantVector(Flavor flavor, std::vector<double> values_from_order_1);

  Flavor flavor() const noexcept { return flavor_; }
  int r_max() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double operator[](int r) const { return values_.at(static_cast<std::size_t>(r)); }
  double at(int r) const;

 private:
  Flavor flavor_;
  std::vector<double> values_;
};

/// m_0..m_rmax with m_0 == 1.
class MomentVector {
 public:
  explicit MomentVector(std::vector<double> values);

  int r_max() const noexcept { return static_cast<int>(values_.size()) - 1; }
  double operator[](int r) const { return values_.at(static_cast<std::size_t>(r)); }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

CumulantVector classical_cumulants(const Spectrum& spectrum, double gaussian_sd, int r_max);
CumulantVector free_cumulants(const Spectrum& spectrum, double semicircular_sd, int r_max);
CumulantVector cumulants(Flavor flavor, const Spectrum& spectrum, double sd, int r_max);

MomentVector moments_from_classical_cumulants(const CumulantVector& c);
MomentVector moments_from_free_cumulants(const CumulantVector& c);
MomentVector moments_from_cumulants(const CumulantVector& c);

CumulantVector classical_cumulants_from_moments(const MomentVector& m);
CumulantVector free_cumulants_from_moments(const MomentVector& m);

/// Plug-in estimator: sample moments (about the sample mean) pushed through
/// the inverse classical recursion; kappa_1 is the sample mean. Requires at
/// least 10 * r_max samples.
CumulantVector empirical_cumulants(std::span<const double> samples, int r_max);

/// Raw empirical moments m_0..m_rmax.
MomentVector empirical_moments(std::span<const double> samples, int r_max);

}  // namespace chaos
