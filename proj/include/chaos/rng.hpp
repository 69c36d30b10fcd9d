#pragma once

#include <cstdint>

namespace chaos {

/// Counter-based generator: draw k of stream s under seed x is a fixed hash
/// of (x, s, k), so streams can be split off and replayed independently.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Independent generator for another stream under the same seed.
  Rng split(std::uint64_t stream) const noexcept { return Rng(seed_, stream); }

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  /// Standard normal, Marsaglia polar method.
  double gaussian() noexcept;
  /// Gamma(shape, 1), Marsaglia-Tsang; shape > 0.
  double gamma(double shape) noexcept;
  /// Chi-square with `dof` degrees of freedom.
  double chi_square(double dof) noexcept { return 2.0 * gamma(0.5 * dof); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace chaos
