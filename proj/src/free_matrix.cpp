// Random-matrix model of the free (Wigner) side: independent GUE matrices are
// asymptotically free semicirculars, so mu0 G_0 + sum lambda_k (G_k^2 - I)
// has an empirical spectral law close to mu0 A + sum lambda_k (S_k^2 - 1).

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "chaos/errors.hpp"
#include "chaos/law.hpp"

namespace chaos {

namespace {

using Matrix = Eigen::MatrixXcd;

// Off-diagonal E|G_ij|^2 = 1/n, diagonal variance 1/n: semicircle of unit variance.
Matrix gue(std::size_t n, Rng& rng) {
  const Eigen::Index dim = static_cast<Eigen::Index>(n);
  const double diag_sd = 1.0 / std::sqrt(static_cast<double>(n));
  const double off_sd = diag_sd / std::sqrt(2.0);
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    g(i, i) = {diag_sd * rng.gaussian(), 0.0};
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const double re = off_sd * rng.gaussian();
      const double im = off_sd * rng.gaussian();
      g(i, j) = {re, im};
      g(j, i) = {re, -im};
    }
  }
  return g;
}

}  // namespace

std::vector<double> sample_free_spectrum(const SecondChaosLaw& law, std::size_t matrix_dim, Rng& rng) {
  if (law.flavor() != Flavor::free) throw InputError("free matrix model needs a free law");
  if (matrix_dim < 2) throw InputError("matrix dimension must be >= 2");

  const Eigen::Index dim = static_cast<Eigen::Index>(matrix_dim);
  Matrix m = Matrix::Zero(dim, dim);
  if (law.mu0() != 0.0) m += law.mu0() * gue(matrix_dim, rng);
  for (double lam : law.eigenvalues()) {
    if (lam == 0.0) continue;
    const Matrix g = gue(matrix_dim, rng);
    Matrix sq(dim, dim);
    sq.noalias() = g * g;
    m += lam * sq;
    m.diagonal().array() -= lam;
  }
  // Products of Hermitian matrices drift off Hermitian by rounding.
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace chaos
