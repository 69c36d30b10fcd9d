#include "chaos/process.hpp"

#include <cmath>
#include <sstream>

#include "chaos/cumulant.hpp"
#include "chaos/errors.hpp"
#include "chaos/numeric.hpp"

namespace chaos {

void FbmSpec::validate() const {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    std::ostringstream msg;
    msg << "Hurst parameter must lie in (0, 1), got " << hurst;
    throw InputError(msg.str());
  }
  if (n < 1) throw InputError("number of increments must be >= 1");
}

SymmetricKernel fbm_increment_covariance(const FbmSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  const double two_h = 2.0 * spec.hurst;
  const double scale = 1.0 / (2.0 * std::pow(static_cast<double>(n), two_h));

  // Toeplitz: fill the symbol once, then index by |k - l|.
  std::vector<double> symbol(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = static_cast<double>(j);
    const double lag_minus = std::abs(d - 1.0);
    symbol[j] = scale * (std::pow(d + 1.0, two_h) + std::pow(lag_minus, two_h) -
                         2.0 * std::pow(d, two_h));
  }
  std::vector<double> data(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) data[k * n + l] = symbol[k > l ? k - l : l - k];
  return SymmetricKernel::from_row_major(n, data);
}

Spectrum qv_spectrum(const SymmetricKernel& increment_covariance) {
  const Spectrum nu = eigen_decompose(increment_covariance);
  const double sigma = std::sqrt(2.0 * nu.power_sum(2));
  if (!(sigma > 0.0)) throw InputError("increment covariance is zero; quadratic variation is degenerate");
  std::vector<double> lambda(nu.eigenvalues());
  for (double& x : lambda) x /= sigma;
  return Spectrum(std::move(lambda));
}

Spectrum qv_spectrum(const FbmSpec& spec) { return qv_spectrum(fbm_increment_covariance(spec)); }

QvStudy qv_study(double hurst, const std::vector<std::size_t>& sizes,
                 const std::optional<LimitTarget>& target, double tol) {
  if (sizes.empty()) throw InputError("study needs at least one size");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1]) throw InputError("study sizes must be strictly increasing");

  QvStudy study;
  study.hurst = hurst;
  study.sizes = sizes;
  for (std::size_t n : sizes) {
    study.spectra.push_back(qv_spectrum(FbmSpec{hurst, n}));
    const auto k = classical_cumulants(study.spectra.back(), 0.0, 6);
    std::vector<double> row;
    for (int r = 2; r <= 6; ++r) row.push_back(k[r]);
    study.cumulant_trajectories.push_back(std::move(row));
  }
  if (target) study.report = assess_sequence(study.spectra, {}, *target, tol);
  return study;
}

}  // namespace chaos
