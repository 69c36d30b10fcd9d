#include <doctest.h>

#include <algorithm>
#include <random>

#include "chaos/errors.hpp"
#include "chaos/law.hpp"
#include "oracles.hpp"

using namespace chaos;

TEST_CASE("characteristic function basic properties") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const SecondChaosLaw law(Flavor::classical, std::abs(u(gen)), {u(gen), u(gen), u(gen)});
    CHECK(std::abs(char_function(law, 0.0) - 1.0) < 1e-15);
    for (double t = -5.0; t <= 5.0; t += 0.37) {
      const auto phi = char_function(law, t);
      CHECK(std::abs(phi) <= 1.0 + 1e-14);
      CHECK(std::abs(char_function(law, -t) - std::conj(phi)) < 1e-14);
    }
  }
  // |phi(t)|^-4 = exp(2 mu0^2 t^2) prod (1 + 4 lambda^2 t^2)
  const SecondChaosLaw law(Flavor::classical, 0.7, {1.0, -0.3});
  for (double t : {0.1, 0.5, 2.0}) {
    const double n2 = std::norm(char_function(law, t));
    const double inv = 1.0 / (n2 * n2);
    const double ref = std::exp(2 * 0.49 * t * t) * (1 + 4 * t * t) * (1 + 4 * 0.09 * t * t);
    CHECK(inv == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(char_function(SecondChaosLaw(Flavor::free, 0.0, {1.0}), 0.3), InputError);
}

TEST_CASE("chi-square(1) density and cdf against closed form") {
  const SecondChaosLaw law(Flavor::classical, 0.0, {1.0});
  for (double x : {-0.9, -0.5, 0.0, 1.0, 3.0, 6.0}) {
    const auto p = pdf(law, x);
    CHECK_FALSE(p.precision_warning);
    CHECK(p.value == doctest::Approx(oracle::centered_chi1_pdf(x)).epsilon(1e-6).scale(1.0));
    const auto c = cdf(law, x);
    CHECK(c.value == doctest::Approx(oracle::centered_chi1_cdf(x)).epsilon(1e-6).scale(1.0));
  }
  CHECK(cdf(law, -2.0).value <= 1e-6);
}

TEST_CASE("Gaussian and zero laws") {
  const SecondChaosLaw g(Flavor::classical, 1.0, {});
  CHECK(pdf(g, 0.0).value == doctest::Approx(0.3989422804).epsilon(1e-8));
  CHECK(cdf(g, 1.0).value == doctest::Approx(oracle::normal_cdf(1.0, 1.0)).epsilon(1e-8));
  const SecondChaosLaw z(Flavor::classical, 0.0, {});
  CHECK(z.is_zero());
  CHECK_THROWS_AS(cdf(z, 0.1), InputError);
}

TEST_CASE("samplers reproduce the named classical laws (KS)") {
  const std::size_t n = 100000;
  const double crit = ks_critical_value(n, 0.01);
  Rng rng(2025);
  SUBCASE("N(0,1)") {
    const SecondChaosLaw law(Flavor::classical, 1.0, {});
    const auto xs = sample_classical(law, n, rng);
    CHECK(ks_statistic(xs, [](double x) { return oracle::normal_cdf(x, 1.0); }) < crit);
  }
  SUBCASE("N^2 - 1") {
    const SecondChaosLaw law(Flavor::classical, 0.0, {1.0});
    const auto xs = sample_classical(law, n, rng);
    CHECK(ks_statistic(xs, oracle::centered_chi1_cdf) < crit);
  }
  SUBCASE("chi-square(6) - 6 via grouped draws") {
    const SecondChaosLaw law(Flavor::classical, 0.0, std::vector<double>(6, 1.0));
    const auto xs = sample_classical(law, n, rng);
    // closed-form cdf of chi^2_6: 1 - e^{-y/2}(1 + y/2 + y^2/8)
    CHECK(ks_statistic(xs, [](double x) {
            const double y = x + 6.0;
            return y <= 0 ? 0.0 : 1.0 - std::exp(-y / 2) * (1 + y / 2 + y * y / 8);
          }) < crit);
  }
  SUBCASE("symmetric pair against inversion on a grid") {
    const SecondChaosLaw law(Flavor::classical, 0.0, {1.0, -1.0});
    auto xs = sample_classical(law, n, rng);
    std::sort(xs.begin(), xs.end());
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.5) {
      const double ecdf = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) / n;
      worst = std::max(worst, std::abs(ecdf - cdf(law, x).value));
    }
    CHECK(worst < crit);
  }
}

TEST_CASE("sampling is deterministic under a seed") {
  const SecondChaosLaw law(Flavor::classical, 0.5, {1.0, 0.2});
  Rng a(7), b(7), c(8);
  const auto xa = sample_classical(law, 100, a);
  CHECK(xa == sample_classical(law, 100, b));
  CHECK(xa != sample_classical(law, 100, c));
}

TEST_CASE("free spectra: semicircle moments improve with dimension") {
  const SecondChaosLaw law(Flavor::free, 1.0, {});
  auto moment_err = [&](std::size_t dim) {
    Rng rng(31);
    const auto ev = sample_free_spectrum(law, dim, rng);
    double m2 = 0, m4 = 0;
    for (double x : ev) {
      m2 += x * x;
      m4 += x * x * x * x;
    }
    m2 /= static_cast<double>(ev.size());
    m4 /= static_cast<double>(ev.size());
    return std::abs(m2 - 1.0) + std::abs(m4 - 2.0);
  };
  const double e_small = moment_err(100);
  const double e_big = moment_err(800);
  CHECK(e_big < 0.1);
  CHECK(e_big <= e_small + 0.02);
}

TEST_CASE("ks helpers") {
  std::vector<double> xs{0.1, 0.2, 0.3, 0.4};
  CHECK(ks_statistic(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }) == doctest::Approx(0.6));
  CHECK(ks_critical_value(100, 0.05) == doctest::Approx(0.1358).epsilon(1e-3));
}

TEST_CASE("named characteristic-function values") {
  const SecondChaosLaw g(Flavor::classical, 1.0, {});
  for (double t : {0.3, 1.0, 2.5}) CHECK(std::abs(char_function(g, t) - std::exp(-t * t / 2)) < 1e-15);
  const SecondChaosLaw chi(Flavor::classical, 0.0, {1.0});
  const auto phi1 = char_function(chi, 1.0);
  const auto ref = std::exp(std::complex<double>(0, -1)) / std::sqrt(std::complex<double>(1, -2));
  CHECK(std::abs(phi1 - ref) < 1e-14);
  CHECK(std::abs(phi1) == doctest::Approx(std::pow(5.0, -0.25)).epsilon(1e-14));
}

TEST_CASE("reciprocal-square identity for mu0 = 0") {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> eig(1 + trial % 5);
    for (double& x : eig) x = u(gen);
    const SecondChaosLaw law(Flavor::classical, 0.0, eig);
    for (double t = -5.0; t <= 5.0; t += 0.25) {
      std::complex<double> prod = 1.0;
      for (double l : eig) prod *= std::complex<double>(1.0, -2.0 * l * t) * std::exp(std::complex<double>(0, 2 * l * t));
      const auto phi = char_function(law, t);
      CHECK(std::abs(1.0 / (phi * phi) - prod) <= 1e-10 * std::max(1.0, std::abs(prod)));
    }
  }
}

TEST_CASE("named cdf and pdf values") {
  CHECK(cdf(SecondChaosLaw(Flavor::classical, 1.0, {}), 0.0).value == doctest::Approx(0.5).epsilon(1e-10));
  const SecondChaosLaw chi(Flavor::classical, 0.0, {1.0});
  CHECK(cdf(chi, -1.0).value <= 1e-6);
  CHECK(std::abs(cdf(chi, 0.0).value - 0.6826894921) < 1e-4);
  CHECK(std::abs(pdf(chi, 0.0).value - 0.2419707245) < 1e-4);
  CHECK(std::abs(cdf(SecondChaosLaw(Flavor::classical, 0.0, {1.0, -1.0}), 0.0).value - 0.5) < 1e-8);
}

TEST_CASE("pdf integrates to one for random laws") {
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const SecondChaosLaw law(Flavor::classical, 0.3 + 0.2 * trial, {u(gen), u(gen), u(gen)});
    const double sigma = std::sqrt(law.variance());
    // trapezoid on a fine grid; the densities are bounded because mu0 > 0
    const int steps = 1600;
    const double lo = -20 * sigma, hi = 20 * sigma, h = (hi - lo) / steps;
    double total = 0.0;
    for (int i = 0; i <= steps; ++i) total += (i == 0 || i == steps ? 0.5 : 1.0) * pdf(law, lo + i * h).value;
    CHECK(std::abs(total * h - 1.0) < 1e-4);
  }
}

TEST_CASE("sampler moments") {
  Rng rng(555);
  CHECK(sample_classical(SecondChaosLaw(Flavor::classical, 0.0, {}), 10, rng) == std::vector<double>(10, 0.0));
  const auto xs = sample_classical(SecondChaosLaw(Flavor::classical, 0.0, {1.0}), 1000000, rng);
  double mean = 0.0, var = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  CHECK(std::abs(mean) < 5.0 * std::sqrt(2.0) / 1000.0);
  CHECK(std::abs(var - 2.0) < 0.05);
}

TEST_CASE("KS separation and one-point case") {
  const std::vector<double> one{0.0};
  CHECK(ks_statistic(one, [](double x) { return oracle::normal_cdf(x, 1.0); }) == doctest::Approx(0.5));
  Rng rng(808);
  const auto g = sample_classical(SecondChaosLaw(Flavor::classical, std::sqrt(2.0), {}), 100000, rng);
  CHECK(ks_statistic(g, [](double x) { return oracle::normal_cdf(x, std::sqrt(2.0)); }) < 0.01);
  const auto c = sample_classical(SecondChaosLaw(Flavor::classical, 0.0, {1.0}), 100000, rng);
  CHECK(ks_statistic(c, [](double x) { return oracle::normal_cdf(x, std::sqrt(2.0)); }) > 0.05);
}

TEST_CASE("free matrix model moments at dim 1000") {
  auto moments = [](const SecondChaosLaw& law, std::uint64_t seed) {
    Rng rng(seed);
    const auto ev = sample_free_spectrum(law, 1000, rng);
    std::vector<double> m(5, 0.0);
    for (double x : ev)
      for (int r = 1; r <= 4; ++r) m[r] += std::pow(x, r);
    for (double& v : m) v /= static_cast<double>(ev.size());
    return m;
  };
  const auto semi = moments(SecondChaosLaw(Flavor::free, 1.0, {}), 1);
  CHECK(std::abs(semi[2] - 1.0) < 0.1);
  CHECK(std::abs(semi[4] - 2.0) < 0.1);
  const auto fp = moments(SecondChaosLaw(Flavor::free, 0.0, {1.0}), 2);
  CHECK(std::abs(fp[2] - 1.0) < 0.15);
  CHECK(std::abs(fp[3] - 1.0) < 0.15);
  CHECK(std::abs(fp[4] - 3.0) < 0.15);
  const auto tet = moments(SecondChaosLaw(Flavor::free, 0.0, {1.0, -1.0}), 3);
  CHECK(std::abs(tet[2] - 2.0) < 0.15);
  CHECK(std::abs(tet[1]) < 0.05);
  CHECK(std::abs(tet[3]) < 0.15);
}

TEST_CASE("free matrix model converges as dim grows") {
  const SecondChaosLaw law(Flavor::free, 0.0, {1.0});
  const auto ref = moments_from_free_cumulants(law.cumulants(6));
  auto residual = [&](std::size_t dim) {
    Rng rng(4);
    const auto ev = sample_free_spectrum(law, dim, rng);
    double total = 0.0;
    for (int r = 2; r <= 6; ++r) {
      double m = 0.0;
      for (double x : ev) m += std::pow(x, r);
      total += std::abs(m / static_cast<double>(ev.size()) - ref[r]);
    }
    return total;
  };
  const double r500 = residual(500);
  const double r2000 = residual(2000);
  MESSAGE("residual dim 500: " << r500 << ", dim 2000: " << r2000);
  CHECK(r2000 < r500);
}
