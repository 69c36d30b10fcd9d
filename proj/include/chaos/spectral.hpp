#pragma once

// Dense symmetric kernels and their spectra.
//
// A kernel is the matrix of a self-adjoint Hilbert-Schmidt operator after
// discretization. Everything downstream (cumulants, limit laws, the
// finite-cumulant criterion) depends on the kernel only through its
// eigenvalues, so this module is where matrices stop and spectra begin.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace chaos {

class SymmetricKernel {
 public:
  SymmetricKernel() = default;

  /// Builds from a square row-major matrix. The stored matrix is
  /// (A + A^T) / 2, so symmetry holds bit-exactly. Throws InputError on
  /// ragged rows or non-finite entries.
  explicit SymmetricKernel(const std::vector<std::vector<double>>& rows);

  static SymmetricKernel from_row_major(std::size_t dim, std::span<const double> data);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }
  std::span<const double> data() const noexcept { return data_; }

  double trace() const noexcept;
  double frobenius_norm() const noexcept;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Eigenvalues sorted by descending magnitude; a positive value precedes a
/// negative one of equal magnitude. Values with |lambda| <= zero_tol are kept
/// but count as zero for profile extraction.
class Spectrum {
 public:
  Spectrum() = default;

  /// Sorts `values`. When zero_tol is absent it defaults to 1e-10 * max|lambda|.
  explicit Spectrum(std::vector<double> values, std::optional<double> zero_tol = std::nullopt);

  const std::vector<double>& eigenvalues() const noexcept { return values_; }
  double zero_tol() const noexcept { return zero_tol_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double max_abs() const noexcept { return values_.empty() ? 0.0 : std::abs(values_.front()); }
  bool is_numerically_zero(std::size_t k) const noexcept {
    return std::abs(values_[k]) <= zero_tol_;
  }

  /// Compensated sum of lambda_k^r over every stored eigenvalue.
  double power_sum(int r) const noexcept;

 private:
  std::vector<double> values_;
  double zero_tol_ = 0.0;
};

struct SpectralProfile {
  std::size_t rank = 0;
  std::vector<double> distinct_values;
  std::vector<int> multiplicities;

  std::size_t a() const noexcept { return distinct_values.size(); }

  /// Each distinct value repeated by its multiplicity.
  std::vector<double> expanded() const;
};

struct Eigendecomposition {
  std::vector<double> eigenvalues;   // same order as the Spectrum built from them
  std::vector<double> eigenvectors;  // dim x dim, row-major, column k pairs with eigenvalues[k]
  int sweeps = 0;
};

/// Cyclic Jacobi on the dense matrix, keeping the rotations.
Eigendecomposition jacobi_eigen(const SymmetricKernel& kernel);

Spectrum eigen_decompose(const SymmetricKernel& kernel,
                         std::optional<double> zero_tol = std::nullopt);

/// Drops numerically zero eigenvalues and groups the rest into clusters of
/// pairwise gap <= cluster_tol (default 1e-8 * max|lambda|). Throws
/// AmbiguityError when the grouping is not well defined.
SpectralProfile spectral_profile(const Spectrum& spectrum,
                                 std::optional<double> cluster_tol = std::nullopt);

SymmetricKernel diag_kernel(std::span<const double> values);

}  // namespace chaos
