#include "chaos/law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "chaos/errors.hpp"
#include "chaos/numeric.hpp"

namespace chaos {

namespace {

using cd = std::complex<double>;

constexpr int kGaussPoints = 16;
constexpr double kPanelWidth = 0.5;
constexpr double kDecayThreshold = 1e-12;
constexpr double kMaxTruncation = 1048576.0;  // 2^20
// Half-angle of the rotated integration ray; below pi/4 so a Gaussian factor
// still decays along it.
constexpr double kRayAngle = std::numbers::pi / 8.0;

struct GaussLegendre {
  std::array<double, kGaussPoints> nodes{};    // on [-1, 1]
  std::array<double, kGaussPoints> weights{};

  GaussLegendre() {
    constexpr int n = kGaussPoints;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

// log(1 + z) accurate for small |z|.
cd log1p_complex(cd z) {
  const double re = 0.5 * std::log1p(2.0 * z.real() + std::norm(z));
  const double im = std::atan2(z.imag(), 1.0 + z.real());
  return {re, im};
}

// log E[exp(i t (F - x))] for complex t in the closed right half-plane.
cd log_cf_shifted(double mu0, std::span<const double> eigenvalues, cd t, double x) {
  const cd i(0.0, 1.0);
  cd acc = -0.5 * mu0 * mu0 * t * t - i * t * x;
  for (double lam : eigenvalues) acc += -0.5 * log1p_complex(-2.0 * i * lam * t) - i * lam * t;
  return acc;
}

void require_classical(const SecondChaosLaw& law) {
  if (law.flavor() != Flavor::classical)
    throw InputError("this operation needs a classical (Wiener) law");
}

// Inversion integrals for a law scaled to unit variance. Integrates along the
// ray t = r e^{i d theta}, with d chosen so exp(-i t y) decays for
// y = x + sum lambda; the integrand is analytic in the swept sector, so the
// real-axis integral is unchanged.
struct UnitLawInverter {
  double mu0;
  std::vector<double> eigenvalues;
  double shift;  // sum of eigenvalues

  enum class Kind { density, distribution };

  InversionResult integrate(double x, Kind kind) const {
    const double y = x + shift;
    const double d = y > 0.0 ? -1.0 : (y < 0.0 ? 1.0 : 0.0);
    const cd dir = std::polar(1.0, d * kRayAngle);
    const double width = kPanelWidth / std::max(1.0, std::abs(y) / 20.0);
    const auto& gl = gauss_legendre();

    // Real reference Gaussian with matching variance (unit), subtracted in the
    // distribution integrand to remove the 1/t pole.
    auto integrand = [&](double r) -> cd {
      const cd t = r * dir;
      const cd g = std::exp(log_cf_shifted(mu0, eigenvalues, t, x));
      if (kind == Kind::density) return g * dir;
      return (g - std::exp(-0.5 * t * t)) / r;
    };
    auto magnitude = [&](double r) {
      const cd t = r * dir;
      const double g = std::exp(log_cf_shifted(mu0, eigenvalues, t, x).real());
      if (kind == Kind::density) return g;
      return g + std::exp(-0.5 * (t * t).real());
    };

    KahanSum re, im;
    double lo = 0.0;
    double limit = 1.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    InversionResult out;
    for (;;) {
      while (lo < limit) {
        const double hi = std::min(limit, lo + width);
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        for (int k = 0; k < kGaussPoints; ++k) {
          const cd v = gl.weights[k] * half * integrand(mid + half * gl.nodes[k]);
          re += v.real();
          im += v.imag();
        }
        lo = hi;
      }
      const double mag = magnitude(limit);
      if (mag < kDecayThreshold && mag <= prev_mag) break;
      prev_mag = mag;
      if (limit >= kMaxTruncation) {
        out.precision_warning = true;
        break;
      }
      limit *= 2.0;
    }
    out.truncation = limit;
    const double pi = std::numbers::pi;
    out.value = kind == Kind::density ? re.value() / pi : 0.5 - im.value() / pi;
    return out;
  }
};

UnitLawInverter unit_inverter(const SecondChaosLaw& law, double& scale) {
  require_classical(law);
  if (law.is_zero()) throw InputError("the zero law has no density or continuous cdf");
  scale = std::sqrt(law.variance());
  UnitLawInverter inv{law.mu0() / scale, {}, 0.0};
  KahanSum shift;
  for (double lam : law.eigenvalues()) {
    if (lam == 0.0) continue;
    inv.eigenvalues.push_back(lam / scale);
    shift += lam / scale;
  }
  inv.shift = shift.value();
  return inv;
}

}  // namespace

SecondChaosLaw::SecondChaosLaw(Flavor flavor, double mu0, std::vector<double> eigenvalues)
    : flavor_(flavor), mu0_(mu0), eigenvalues_(std::move(eigenvalues)) {
  if (!(mu0_ >= 0.0) || !std::isfinite(mu0_)) throw InputError("law mu0 must be finite and >= 0");
  for (double lam : eigenvalues_)
    if (!std::isfinite(lam)) throw InputError("law eigenvalues must be finite");
}

bool SecondChaosLaw::is_zero() const noexcept {
  return mu0_ == 0.0 && std::all_of(eigenvalues_.begin(), eigenvalues_.end(),
                                    [](double lam) { return lam == 0.0; });
}

double SecondChaosLaw::variance() const noexcept {
  KahanSum s;
  for (double lam : eigenvalues_) s += lam * lam;
  const double factor = flavor_ == Flavor::classical ? 2.0 : 1.0;
  return mu0_ * mu0_ + factor * s.value();
}

CumulantVector SecondChaosLaw::cumulants(int r_max) const {
  return chaos::cumulants(flavor_, Spectrum(eigenvalues_), mu0_, r_max);
}

std::complex<double> log_char_function(const SecondChaosLaw& law, double t) {
  require_classical(law);
  return log_cf_shifted(law.mu0(), law.eigenvalues(), cd(t, 0.0), 0.0);
}

std::complex<double> char_function(const SecondChaosLaw& law, double t) {
  return std::exp(log_char_function(law, t));
}

// Without a Gaussian part and with one-signed eigenvalues the law lives on a
// half-line starting at -sum(lambda); outside it the answer is exact.
std::optional<InversionResult> outside_support(const SecondChaosLaw& law, double x, bool density) {
  if (law.mu0() != 0.0) return std::nullopt;
  bool any_pos = false, any_neg = false;
  double shift = 0.0;
  for (double l : law.eigenvalues()) {
    any_pos = any_pos || l > 0.0;
    any_neg = any_neg || l < 0.0;
    shift += l;
  }
  if (any_pos == any_neg) return std::nullopt;
  const double edge = -shift;
  if (any_pos && x <= edge) return InversionResult{0.0, 0.0, false};
  if (any_neg && x >= edge) return InversionResult{density ? 0.0 : 1.0, 0.0, false};
  return std::nullopt;
}

InversionResult cdf(const SecondChaosLaw& law, double x) {
  if (auto edge = outside_support(law, x, false)) {
    require_classical(law);
    return *edge;
  }
  double scale = 1.0;
  const auto inv = unit_inverter(law, scale);
  auto out = inv.integrate(x / scale, UnitLawInverter::Kind::distribution);
  if (out.value < 0.0 || out.value > 1.0) {
    if (out.value < -1e-6 || out.value > 1.0 + 1e-6) out.precision_warning = true;
    out.value = std::clamp(out.value, 0.0, 1.0);
  }
  return out;
}

InversionResult pdf(const SecondChaosLaw& law, double x) {
  if (auto edge = outside_support(law, x, true)) {
    require_classical(law);
    return *edge;
  }
  double scale = 1.0;
  const auto inv = unit_inverter(law, scale);
  auto out = inv.integrate(x / scale, UnitLawInverter::Kind::density);
  out.value /= scale;
  if (out.value < 0.0) {
    if (out.value < -1e-6) out.precision_warning = true;
    out.value = 0.0;
  }
  return out;
}

std::vector<double> sample_classical(const SecondChaosLaw& law, std::size_t n, Rng& rng) {
  require_classical(law);
  if (n == 0) throw InputError("sample count must be >= 1");

  // Equal eigenvalues share one chi-square draw: sum_{j<m} lambda (N_j^2 - 1)
  // has the law of lambda (chi^2_m - m).
  std::vector<double> sorted = law.eigenvalues();
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, int>> groups;
  for (double lam : sorted) {
    if (lam == 0.0) continue;
    if (!groups.empty() && groups.back().first == lam)
      ++groups.back().second;
    else
      groups.emplace_back(lam, 1);
  }

  constexpr int kDirectSquares = 4;
  std::vector<double> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    double v = law.mu0() != 0.0 ? law.mu0() * rng.gaussian() : 0.0;
    for (const auto& [lam, m] : groups) {
      double chi;
      if (m <= kDirectSquares) {
        chi = 0.0;
        for (int j = 0; j < m; ++j) {
          const double z = rng.gaussian();
          chi += z * z;
        }
      } else {
        chi = rng.chi_square(m);
      }
      v += lam * (chi - m);
    }
    out[s] = v;
  }
  return out;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf_fn) {
  if (samples.empty()) throw InputError("KS statistic needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf_fn(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

}  // namespace chaos
