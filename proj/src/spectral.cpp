#include "chaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chaos/errors.hpp"
#include "chaos/numeric.hpp"

namespace chaos {

namespace {

constexpr double kJacobiRelTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

// |.|-descending, positive before negative on ties.
bool spectral_order(double x, double y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ax != ay) return ax > ay;
  return x > y;
}

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sum += a[i * n + j] * a[i * n + j];
  return std::sqrt(sum);
}

// Runs cyclic Jacobi in place on `a` (row-major, symmetric). When `v` is
// non-null it accumulates the rotations, starting from the identity.
int jacobi_sweeps(std::vector<double>& a, std::size_t n, std::vector<double>* v) {
  double norm = 0.0;
  for (double x : a) norm += x * x;
  norm = std::sqrt(norm);
  if (v) {
    v->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*v)[i * n + i] = 1.0;
  }
  if (n < 2 || norm == 0.0) return 0;

  const double target = kJacobiRelTol * norm;
  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a, n) < target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          const double new_kp = c * akp - s * akq;
          const double new_kq = s * akp + c * akq;
          a[k * n + p] = new_kp;
          a[p * n + k] = new_kp;
          a[k * n + q] = new_kq;
          a[q * n + k] = new_kq;
        }
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;

        if (v) {
          auto& vm = *v;
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = vm[k * n + p];
            const double vkq = vm[k * n + q];
            vm[k * n + p] = c * vkp - s * vkq;
            vm[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  return sweep;
}

}  // namespace

SymmetricKernel::SymmetricKernel(const std::vector<std::vector<double>>& rows) {
  dim_ = rows.size();
  data_.assign(dim_ * dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (rows[i].size() != dim_) {
      std::ostringstream msg;
      msg << "kernel row " << i << " has " << rows[i].size() << " entries, expected " << dim_;
      throw InputError(msg.str());
    }
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      if (!std::isfinite(rows[i][j])) {
        std::ostringstream msg;
        msg << "kernel entry (" << i << ", " << j << ") is not finite";
        throw InputError(msg.str());
      }
      data_[i * dim_ + j] = 0.5 * (rows[i][j] + rows[j][i]);
    }
  }
}

SymmetricKernel SymmetricKernel::from_row_major(std::size_t dim, std::span<const double> data) {
  if (data.size() != dim * dim) throw InputError("kernel data size does not match dim*dim");
  std::vector<std::vector<double>> rows(dim, std::vector<double>(dim));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) rows[i][j] = data[i * dim + j];
  return SymmetricKernel(rows);
}

double SymmetricKernel::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double SymmetricKernel::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

Spectrum::Spectrum(std::vector<double> values, std::optional<double> zero_tol)
    : values_(std::move(values)) {
  for (double x : values_)
    if (!std::isfinite(x)) throw InputError("spectrum contains a non-finite eigenvalue");
  std::stable_sort(values_.begin(), values_.end(), spectral_order);
  if (zero_tol) {
    if (*zero_tol < 0.0 || !std::isfinite(*zero_tol)) throw InputError("zero_tol must be >= 0");
    zero_tol_ = *zero_tol;
  } else {
    zero_tol_ = 1e-10 * max_abs();
  }
}

double Spectrum::power_sum(int r) const noexcept {
  KahanSum sum;
  for (double x : values_) sum += ipow(x, r);
  return sum.value();
}

std::vector<double> SpectralProfile::expanded() const {
  std::vector<double> out;
  out.reserve(rank);
  for (std::size_t i = 0; i < distinct_values.size(); ++i)
    out.insert(out.end(), static_cast<std::size_t>(multiplicities[i]), distinct_values[i]);
  return out;
}

Eigendecomposition jacobi_eigen(const SymmetricKernel& kernel) {
  const std::size_t n = kernel.dim();
  std::vector<double> a(kernel.data().begin(), kernel.data().end());
  std::vector<double> v;
  Eigendecomposition out;
  out.sweeps = jacobi_sweeps(a, n, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return spectral_order(a[i * n + i], a[j * n + j]);
  });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k] * n + order[k]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

Spectrum eigen_decompose(const SymmetricKernel& kernel, std::optional<double> zero_tol) {
  const std::size_t n = kernel.dim();
  std::vector<double> a(kernel.data().begin(), kernel.data().end());
  jacobi_sweeps(a, n, nullptr);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  return Spectrum(std::move(values), zero_tol);
}

SpectralProfile spectral_profile(const Spectrum& spectrum, std::optional<double> cluster_tol) {
  const double tol = cluster_tol.value_or(1e-8 * spectrum.max_abs());
  if (tol < 0.0 || !std::isfinite(tol)) throw InputError("cluster_tol must be >= 0");

  std::vector<double> survivors;
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    if (!spectrum.is_numerically_zero(k)) survivors.push_back(spectrum.eigenvalues()[k]);
  std::sort(survivors.begin(), survivors.end());

  // Single-linkage on the sorted line; a cluster whose span exceeds tol
  // cannot satisfy the pairwise-gap contract and is reported as ambiguous.
  struct Cluster {
    std::size_t begin, end;
    double mean;
  };
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < survivors.size();) {
    std::size_t j = i + 1;
    while (j < survivors.size() && survivors[j] - survivors[j - 1] <= tol) ++j;
    if (survivors[j - 1] - survivors[i] > tol) {
      const double culprit = survivors[(i + j) / 2];
      std::ostringstream msg;
      msg.precision(17);
      msg << "eigenvalue " << culprit << " chains clusters spanning more than cluster_tol " << tol;
      throw AmbiguityError(msg.str(), culprit);
    }
    KahanSum sum;
    for (std::size_t k = i; k < j; ++k) sum += survivors[k];
    clusters.push_back({i, j, sum.value() / static_cast<double>(j - i)});
    i = j;
  }

  for (double x : survivors) {
    int near = 0;
    for (const auto& c : clusters)
      if (std::abs(x - c.mean) <= tol) ++near;
    if (near > 1) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "eigenvalue " << x << " is within cluster_tol of " << near << " cluster means";
      throw AmbiguityError(msg.str(), x);
    }
  }

  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const Cluster& l, const Cluster& r) { return spectral_order(l.mean, r.mean); });
  SpectralProfile profile;
  for (const auto& c : clusters) {
    profile.distinct_values.push_back(c.mean);
    profile.multiplicities.push_back(static_cast<int>(c.end - c.begin));
    profile.rank += c.end - c.begin;
  }
  return profile;
}

SymmetricKernel diag_kernel(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) data[i * n + i] = values[i];
  return SymmetricKernel::from_row_major(n, data);
}

}  // namespace chaos
