#include <doctest.h>

#include <random>

#include "chaos/errors.hpp"
#include "chaos/spectral.hpp"
#include "oracles.hpp"

using namespace chaos;

TEST_CASE("eigen_decompose on small exact cases") {
  SUBCASE("identity") {
    const auto s = eigen_decompose(SymmetricKernel({{1, 0}, {0, 1}}), 0.0);
    CHECK(s.eigenvalues() == std::vector<double>{1, 1});
  }
  SUBCASE("swap matrix gives +1 before -1") {
    const auto s = eigen_decompose(SymmetricKernel({{0, 1}, {1, 0}}), 0.0);
    REQUIRE(s.size() == 2);
    CHECK(s.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.eigenvalues()[1] == doctest::Approx(-1.0).epsilon(1e-15));
  }
  SUBCASE("diagonal ordering with sign tie-break") {
    const auto s = eigen_decompose(diag_kernel(std::vector<double>{-0.5, 0.25, 0.5}), 0.0);
    CHECK(s.eigenvalues() == std::vector<double>{0.5, -0.5, 0.25});
  }
}

TEST_CASE("kernel construction symmetrizes and rejects bad input") {
  const SymmetricKernel k({{1.0, 2.0}, {0.0, 3.0}});
  CHECK(k(0, 1) == 1.0);
  CHECK(k(1, 0) == 1.0);
  CHECK_THROWS_AS(SymmetricKernel({{1.0, NAN}, {0.0, 1.0}}), InputError);
  CHECK_THROWS_AS(SymmetricKernel({{1.0, 2.0}, {0.0}}), InputError);
  CHECK_THROWS_AS(eigen_decompose(diag_kernel(std::vector<double>{1.0, INFINITY})), InputError);
}

TEST_CASE("diag_kernel") {
  CHECK(diag_kernel(std::vector<double>{2}).dim() == 1);
  CHECK(diag_kernel(std::vector<double>{2})(0, 0) == 2.0);
  const auto k = diag_kernel(std::vector<double>{1, -1});
  CHECK(k(0, 0) == 1.0);
  CHECK(k(1, 1) == -1.0);
  CHECK(k(0, 1) == 0.0);
  CHECK(diag_kernel(std::vector<double>{}).dim() == 0);
  CHECK(eigen_decompose(diag_kernel(std::vector<double>{})).empty());

  const auto s = eigen_decompose(diag_kernel(std::vector<double>{0.3, 0.3, -0.1}), 0.0);
  CHECK(s.eigenvalues() == std::vector<double>{0.3, 0.3, -0.1});
}

TEST_CASE("round trip through diag_kernel for random lists") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial % 9);
    for (double& x : v) x = u(gen);
    const auto s = eigen_decompose(diag_kernel(v), 0.0);
    CHECK(oracle::multiset_distance(s.eigenvalues(), v) <= 1e-10);
  }
}

TEST_CASE("orthogonal invariance, trace identities, reconstruction") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (std::size_t n : {2u, 3u, 5u, 8u, 13u, 24u}) {
    std::vector<double> diag(n);
    for (double& x : diag) x = u(gen);
    const auto q = oracle::random_rotation(n, gen, static_cast<int>(4 * n * n));
    const auto dk = diag_kernel(diag);
    const std::vector<double> d(dk.data().begin(), dk.data().end());
    const auto a = oracle::conjugate(q, d, n);
    const auto kernel = SymmetricKernel::from_row_major(n, a);
    const auto s = eigen_decompose(kernel, 0.0);
    CHECK(oracle::multiset_distance(s.eigenvalues(), diag) <= 1e-10);

    // trace(A) = sum lambda, ||A||_F^2 = sum lambda^2, trace(A^3) = sum lambda^3
    double tr3 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) tr3 += a[i * n + j] * a[j * n + k] * a[k * n + i];
    CHECK(s.power_sum(1) == doctest::Approx(kernel.trace()).epsilon(1e-10));
    CHECK(s.power_sum(2) ==
          doctest::Approx(kernel.frobenius_norm() * kernel.frobenius_norm()).epsilon(1e-10));
    CHECK(s.power_sum(3) == doctest::Approx(tr3).epsilon(1e-9));

    // A v_k = lambda_k v_k
    const auto e = jacobi_eigen(kernel);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a[i * n + j] * e.eigenvectors[j * n + k];
        worst = std::max(worst, std::abs(av - e.eigenvalues[k] * e.eigenvectors[i * n + k]));
      }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("spectral_profile groups, counts and drops zeros") {
  SUBCASE("named example") {
    const auto p = spectral_profile(Spectrum({0.5, 0.5, -0.5, 0.0, 1e-14}));
    CHECK(p.rank == 3);
    CHECK(p.distinct_values == std::vector<double>{0.5, -0.5});
    CHECK(p.multiplicities == std::vector<int>{2, 1});
  }
  SUBCASE("all zero") {
    const auto p = spectral_profile(Spectrum({0.0, 0.0}));
    CHECK(p.rank == 0);
    CHECK(p.a() == 0);
  }
  SUBCASE("matches gap-scan oracle and is idempotent") {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> grid(-6, 6);
    std::uniform_real_distribution<double> jitter(-1e-11, 1e-11);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> v;
      for (int k = 0; k < 12; ++k) {
        const int g = grid(gen);
        if (g != 0) v.push_back(0.5 * g + jitter(gen));
      }
      if (v.empty()) continue;
      const Spectrum s(v);
      const auto p = spectral_profile(s, 1e-8);
      const auto ref = oracle::gap_clusters(v, 1e-8);
      REQUIRE(p.a() == ref.size());
      std::size_t total = 0;
      for (int m : p.multiplicities) total += static_cast<std::size_t>(m);
      CHECK(total == v.size());
      for (const auto& cluster : ref) {
        double mean = 0.0;
        for (double x : cluster) mean += x;
        mean /= static_cast<double>(cluster.size());
        bool found = false;
        for (std::size_t i = 0; i < p.a(); ++i)
          if (std::abs(p.distinct_values[i] - mean) < 1e-9) {
            found = true;
            CHECK(p.multiplicities[i] == static_cast<int>(cluster.size()));
          }
        CHECK(found);
      }
      const auto again = spectral_profile(Spectrum(p.expanded()), 1e-8);
      CHECK(again.multiplicities == p.multiplicities);
      CHECK(oracle::multiset_distance(again.distinct_values, p.distinct_values) <= 1e-12);
    }
  }
  SUBCASE("chained values wider than the tolerance are ambiguous") {
    CHECK_THROWS_AS(spectral_profile(Spectrum({1.0, 1.0 + 0.6e-8, 1.0 + 1.2e-8}), 1e-8), AmbiguityError);
  }
}

TEST_CASE("power sums are compensated") {
  std::vector<double> v(1000, 0.1);
  v.push_back(1.0);
  const Spectrum s(v);
  CHECK(s.power_sum(1) == doctest::Approx(101.0).epsilon(1e-14));
}

TEST_CASE("profile edge cases") {
  const auto exact = spectral_profile(Spectrum({1.0, 1.0, -1.0}), 0.0);
  CHECK(exact.rank == 3);
  CHECK(exact.distinct_values == std::vector<double>{1.0, -1.0});
  CHECK(exact.multiplicities == std::vector<int>{2, 1});

  const auto near = spectral_profile(Spectrum({0.5, 0.5 + 1e-12, 0.0}, 1e-9), 1e-9);
  CHECK(near.rank == 2);
  CHECK(near.a() == 1);
  CHECK(near.distinct_values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(near.multiplicities == std::vector<int>{2});

  CHECK(spectral_profile(Spectrum(std::vector<double>{})).rank == 0);
}
