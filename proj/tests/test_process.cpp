#include <doctest.h>

#include "chaos/errors.hpp"
#include "chaos/process.hpp"
#include "oracles.hpp"

using namespace chaos;

TEST_CASE("fBm increment covariance is Toeplitz, PSD and sums to the total variance") {
  for (double h : {0.3, 0.5, 0.75, 0.9}) {
    const std::size_t n = 32;
    const auto c = fbm_increment_covariance({h, n});
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) CHECK(c(i, j) == doctest::Approx(c(i - 1, j - 1)).epsilon(1e-14));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) total += c(i, j);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));  // Var B_1 = 1
    const auto s = eigen_decompose(c, 0.0);
    CHECK(s.eigenvalues().back() >= -1e-12);
  }
  CHECK_THROWS_AS(fbm_increment_covariance({1.0, 8}), InputError);
  CHECK_THROWS_AS(fbm_increment_covariance({0.5, 0}), InputError);
}

TEST_CASE("Brownian quadratic variation is a flat spectrum") {
  const auto s = qv_spectrum(FbmSpec{0.5, 50});
  for (double x : s.eigenvalues()) CHECK(x == doctest::Approx(1.0 / std::sqrt(100.0)).epsilon(1e-12));
  const auto k = classical_cumulants(s, 0.0, 4);
  CHECK(k[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k[4] == doctest::Approx(12.0 / 50).epsilon(1e-12));
}

TEST_CASE("normalized QV always has unit variance") {
  for (double h : {0.2, 0.6, 0.85})
    for (std::size_t n : {8u, 40u}) {
      const auto k = classical_cumulants(qv_spectrum(FbmSpec{h, n}), 0.0, 2);
      CHECK(k[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
  CHECK_THROWS_AS(qv_spectrum(diag_kernel(std::vector<double>{0.0, 0.0})), InputError);
}

TEST_CASE("qv_study trajectories and verdicts") {
  const auto low = qv_study(0.5, {16, 64, 256}, LimitTarget::gaussian(1.0), 0.1);
  REQUIRE(low.report);
  CHECK(low.report->verdict == Verdict::consistent);
  CHECK(low.cumulant_trajectories[2][2] == doctest::Approx(12.0 / 256).epsilon(1e-10));

  const auto high = qv_study(0.9, {16, 64}, std::nullopt, 0.1);
  CHECK_FALSE(high.report);
  for (const auto& k : high.cumulant_trajectories) CHECK(k[1] > 1.0);
  CHECK_THROWS_AS(qv_study(0.5, {64, 16}, std::nullopt, 0.1), InputError);
}

TEST_CASE("named covariance and spectrum values") {
  const auto c = fbm_increment_covariance({0.5, 4});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(c(i, j) == (i == j ? 0.25 : 0.0));
  const auto c2 = fbm_increment_covariance({0.75, 2});
  CHECK(c2(0, 1) == doctest::Approx((std::pow(2.0, 1.5) - 2.0) / (2.0 * std::pow(2.0, 1.5))).epsilon(1e-14));
  CHECK(c2(0, 1) == doctest::Approx(0.14645).epsilon(1e-4));
  // direct expansion of E[X_s X_t] = (s^2H + t^2H - |s-t|^2H)/2 over the two increments
  auto cov = [](double s, double t) { return 0.5 * (std::pow(s, 1.5) + std::pow(t, 1.5) - std::pow(std::abs(s - t), 1.5)); };
  const double direct = cov(0.5, 1.0) - cov(0.5, 0.5) - cov(0.0, 1.0) + cov(0.0, 0.5);
  CHECK(c2(0, 1) == doctest::Approx(direct).epsilon(1e-14));

  for (double h : {0.3, 0.5, 0.8}) {
    const auto s = qv_spectrum(FbmSpec{h, 20});
    CHECK(s.power_sum(2) == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("H = 0.6 residuals decrease under the Gaussian target") {
  const auto st = qv_study(0.6, {16, 64, 256}, LimitTarget::gaussian(1.0), 1e-2);
  REQUIRE(st.report);
  const auto& tb = st.report->trend_b;
  CHECK(tb[0] > tb[1]);
  CHECK(tb[1] > tb[2]);
  const auto half = qv_study(0.5, {16, 64, 256}, LimitTarget::gaussian(1.0), 1e-1);
  CHECK(half.report->trend_b[0] * 16 == doctest::Approx(half.report->trend_b[2] * 256).epsilon(1e-9));
}

TEST_CASE("PSD across the Hurst grid") {
  for (int i = 1; i <= 9; ++i) {
    const auto s = eigen_decompose(fbm_increment_covariance({0.1 * i, 128}), 0.0);
    CHECK(s.eigenvalues().back() >= -1e-10);
  }
  const auto big = eigen_decompose(fbm_increment_covariance({0.9, 512}), 0.0);
  CHECK(big.eigenvalues().back() >= -1e-10);
}

TEST_CASE("self-similarity: n^{2H} C is the Toeplitz matrix of the symbol") {
  for (double h : {0.3, 0.7}) {
    for (std::size_t n : {10u, 40u}) {
      std::vector<std::vector<double>> rows(n, std::vector<double>(n));
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          const double j = static_cast<double>(k) - static_cast<double>(l);
          rows[k][l] = 0.5 * (std::pow(std::abs(j + 1), 2 * h) + std::pow(std::abs(j - 1), 2 * h) -
                              2 * std::pow(std::abs(j), 2 * h));
        }
      std::vector<double> scaled = eigen_decompose(fbm_increment_covariance({h, n}), 0.0).eigenvalues();
      for (double& x : scaled) x *= std::pow(static_cast<double>(n), 2 * h);
      const auto symbol = eigen_decompose(SymmetricKernel(rows), 0.0).eigenvalues();
      CHECK(oracle::multiset_distance(scaled, symbol) <= 1e-10);
    }
  }
}
