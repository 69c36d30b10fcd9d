#include "chaos/cumulant.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "chaos/errors.hpp"
#include "chaos/numeric.hpp"

namespace chaos {

namespace {

void require_rmax(int r_max) {
  if (r_max < 2) {
    std::ostringstream msg;
    msg << "r_max must be >= 2, got " << r_max;
    throw InputError(msg.str());
  }
}

void require_sd(double sd) {
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw InputError("component sd must be finite and >= 0");
}

void require_flavor(const CumulantVector& c, Flavor expected) {
  if (c.flavor() != expected) {
    throw InputError(std::string("expected ") + std::string(to_string(expected)) +
                     " cumulants, got " + std::string(to_string(c.flavor())));
  }
}

// [x^j] of (sum_i m_i x^i)^k, using m_0..m_j only.
double power_coefficient(const std::vector<double>& m, int k, int j) {
  std::vector<double> acc(static_cast<std::size_t>(j) + 1, 0.0);
  acc[0] = 1.0;
  for (int step = 0; step < k; ++step) {
    std::vector<double> next(acc.size(), 0.0);
    for (int a = 0; a <= j; ++a) {
      if (acc[a] == 0.0) continue;
      for (int b = 0; a + b <= j; ++b) next[a + b] += acc[a] * m[b];
    }
    acc.swap(next);
  }
  return acc[j];
}

}  // namespace

std::string_view to_string(Flavor f) noexcept {
  return f == Flavor::classical ? "classical" : "free";
}

Flavor parse_flavor(std::string_view s) {
  if (s == "classical") return Flavor::classical;
  if (s == "free") return Flavor::free;
  throw InputError("unknown flavor '" + std::string(s) + "' (expected classical or free)");
}

CumulantVector::CumulantVector(Flavor flavor, std::vector<double> values_from_order_1)
    : flavor_(flavor) {
  values_.reserve(values_from_order_1.size() + 1);
  values_.push_back(0.0);
  values_.insert(values_.end(), values_from_order_1.begin(), values_from_order_1.end());
}

double CumulantVector::at(int r) const {
  if (r < 1 || r > r_max()) {
    std::ostringstream msg;
    msg << "cumulant of order " << r << " requested, vector holds orders 1.." << r_max();
    throw InputError(msg.str());
  }
  return values_[static_cast<std::size_t>(r)];
}

MomentVector::MomentVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty() || values_[0] != 1.0) throw InputError("moment vector must start with m_0 = 1");
}

CumulantVector classical_cumulants(const Spectrum& spectrum, double gaussian_sd, int r_max) {
  require_rmax(r_max);
  require_sd(gaussian_sd);
  std::vector<double> k(static_cast<std::size_t>(r_max), 0.0);
  k[1] = gaussian_sd * gaussian_sd + 2.0 * spectrum.power_sum(2);
  for (int r = 3; r <= r_max; ++r)
    k[r - 1] = ipow(2.0, r - 1) * factorial(r - 1) * spectrum.power_sum(r);
  return CumulantVector(Flavor::classical, std::move(k));
}

CumulantVector free_cumulants(const Spectrum& spectrum, double semicircular_sd, int r_max) {
  require_rmax(r_max);
  require_sd(semicircular_sd);
  std::vector<double> k(static_cast<std::size_t>(r_max), 0.0);
  k[1] = semicircular_sd * semicircular_sd + spectrum.power_sum(2);
  for (int r = 3; r <= r_max; ++r) k[r - 1] = spectrum.power_sum(r);
  return CumulantVector(Flavor::free, std::move(k));
}

CumulantVector cumulants(Flavor flavor, const Spectrum& spectrum, double sd, int r_max) {
  return flavor == Flavor::classical ? classical_cumulants(spectrum, sd, r_max)
                                     : free_cumulants(spectrum, sd, r_max);
}

MomentVector moments_from_classical_cumulants(const CumulantVector& c) {
  require_flavor(c, Flavor::classical);
  const int n_max = c.r_max();
  std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    KahanSum s;
    for (int k = 1; k <= n; ++k) s += binomial(n - 1, k - 1) * c[k] * m[n - k];
    m[n] = s.value();
  }
  return MomentVector(std::move(m));
}

MomentVector moments_from_free_cumulants(const CumulantVector& c) {
  require_flavor(c, Flavor::free);
  const int n_max = c.r_max();
  std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    KahanSum s;
    for (int k = 1; k <= n; ++k)
      if (c[k] != 0.0) s += c[k] * power_coefficient(m, k, n - k);
    m[n] = s.value();
  }
  return MomentVector(std::move(m));
}

MomentVector moments_from_cumulants(const CumulantVector& c) {
  return c.flavor() == Flavor::classical ? moments_from_classical_cumulants(c)
                                         : moments_from_free_cumulants(c);
}

CumulantVector classical_cumulants_from_moments(const MomentVector& m) {
  const int n_max = m.r_max();
  std::vector<double> k(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    KahanSum s;
    s += m[n];
    for (int j = 1; j < n; ++j) s += -binomial(n - 1, j - 1) * k[j] * m[n - j];
    k[n] = s.value();
  }
  return CumulantVector(Flavor::classical, std::vector<double>(k.begin() + 1, k.end()));
}

CumulantVector free_cumulants_from_moments(const MomentVector& m) {
  const int n_max = m.r_max();
  std::vector<double> k(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    KahanSum s;
    s += m[n];
    for (int j = 1; j < n; ++j)
      if (k[j] != 0.0) s += -k[j] * power_coefficient(m.values(), j, n - j);
    k[n] = s.value();
  }
  return CumulantVector(Flavor::free, std::vector<double>(k.begin() + 1, k.end()));
}

MomentVector empirical_moments(std::span<const double> samples, int r_max) {
  if (samples.empty()) throw InputError("empirical moments need at least one sample");
  std::vector<KahanSum> sums(static_cast<std::size_t>(r_max) + 1);
  for (double x : samples) {
    double p = 1.0;
    for (int r = 1; r <= r_max; ++r) {
      p *= x;
      sums[r] += p;
    }
  }
  std::vector<double> m(static_cast<std::size_t>(r_max) + 1, 0.0);
  m[0] = 1.0;
  const double n = static_cast<double>(samples.size());
  for (int r = 1; r <= r_max; ++r) m[r] = sums[r].value() / n;
  return MomentVector(std::move(m));
}

CumulantVector empirical_cumulants(std::span<const double> samples, int r_max) {
  require_rmax(r_max);
  const std::size_t needed = 10 * static_cast<std::size_t>(r_max);
  if (samples.size() < needed) {
    std::ostringstream msg;
    msg << "empirical cumulants up to order " << r_max << " need at least " << needed
        << " samples, got " << samples.size();
    throw InputError(msg.str());
  }
  KahanSum total;
  for (double x : samples) total += x;
  const double mean = total.value() / static_cast<double>(samples.size());

  std::vector<double> centered(samples.begin(), samples.end());
  for (double& x : centered) x -= mean;
  CumulantVector central = classical_cumulants_from_moments(empirical_moments(centered, r_max));

  std::vector<double> k(static_cast<std::size_t>(r_max), 0.0);
  k[0] = mean;
  for (int r = 2; r <= r_max; ++r) k[r - 1] = central[r];
  return CumulantVector(Flavor::classical, std::move(k));
}

}  // namespace chaos
