#pragma once

// Finite-cumulant convergence criterion for second-chaos sequences.
//
// A target law mu0 * Z + sum_i m_i mu_i (Z_i^2 - 1) with finitely many
// distinct nonzero mu_i is pinned down by three quantities along a sequence:
//   (a) the order-2 cumulant,
//   (b) a Q-weighted combination of cumulants of orders 3..deg Q, where
//       Q(x) = x^{2(1 + [mu0 != 0])} prod_i (x - mu_i)^2,
//   (c) a(f) cumulants of consecutive orders starting at 2(1 + [mu0 != 0]).
// The same machinery covers the free (Wigner) side, with free cumulants and
// no (r-1)! 2^{r-1} normalization in (b).

#include <optional>
#include <string>
#include <vector>

#include "chaos/cumulant.hpp"
#include "chaos/spectral.hpp"

namespace chaos {

class LimitTarget {
 public:
  /// Throws InputError unless mu0 >= 0, values are nonzero and pairwise
  /// distinct, multiplicities are positive and aligned with values, and
  /// mu0 + sum m_i mu_i^2 > 0.
  LimitTarget(Flavor flavor, double mu0, std::vector<double> distinct_values,
              std::vector<int> multiplicities);

  /// The degenerate zero law (mu0 = 0, no eigenvalues).
  static LimitTarget zero_law(Flavor flavor);

  static LimitTarget gaussian(double sd);                // N(0, sd^2)
  static LimitTarget semicircular(double sd);            // S(0, sd^2)
  static LimitTarget centered_chi_square(int degrees);   // chi^2_r - r
  static LimitTarget centered_free_poisson(int rate);
  static LimitTarget tetilla();

  Flavor flavor() const noexcept { return flavor_; }
  double mu0() const noexcept { return mu0_; }
  const std::vector<double>& distinct_values() const noexcept { return values_; }
  const std::vector<int>& multiplicities() const noexcept { return mults_; }
  std::size_t a() const noexcept { return values_.size(); }
  int rank() const noexcept;
  bool is_zero_law() const noexcept { return mu0_ == 0.0 && values_.empty(); }

  /// Smallest admissible start for the consecutive-order window, 2(1 + [mu0 != 0]).
  int min_start_order() const noexcept { return mu0_ != 0.0 ? 4 : 2; }

  /// The target's eigenvalues repeated by multiplicity.
  Spectrum expanded_spectrum() const;

  /// Same spectrum, other flavor, with the Gaussian/semicircular size replaced.
  LimitTarget with_flavor(Flavor flavor, double mu0) const;

 private:
  LimitTarget() = default;
  Flavor flavor_ = Flavor::classical;
  double mu0_ = 0.0;
  std::vector<double> values_;
  std::vector<int> mults_;
};

struct QPolynomial {
  std::vector<double> coefficients;  // index == power of x

  int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
  double operator()(double x) const noexcept;
  /// Q^{(r)}(0) / r!, zero beyond the degree.
  double coefficient(int r) const noexcept {
    return r >= 0 && r <= degree() ? coefficients[static_cast<std::size_t>(r)] : 0.0;
  }
};

QPolynomial build_q(const LimitTarget& target);

struct ConditionValues {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> c;
  std::vector<int> orders;  // cumulant orders behind c
};

/// Evaluates the three condition statistics for one cumulant vector.
/// start_order defaults to target.min_start_order().
ConditionValues condition_values(const CumulantVector& cumulants, const LimitTarget& target,
                                 const QPolynomial& q, std::optional<int> start_order = std::nullopt);

/// Highest cumulant order condition_values needs.
int required_order(const LimitTarget& target, const QPolynomial& q, int start_order);

/// Factor turning the normalized (b) value into the integer-coefficient form
/// quoted for the named examples: (deg Q - 1)! 2^{deg Q - 1} classically, 1 free.
double b_multiplier(Flavor flavor, const QPolynomial& q) noexcept;

/// The target's own condition values, from its analytic cumulants.
ConditionValues target_condition_values(const LimitTarget& target, const QPolynomial& q,
                                        int start_order);

enum class Verdict { consistent, inconsistent, insufficient_data };
std::string to_string(Verdict v);

struct CriterionReport {
  Flavor flavor = Flavor::classical;
  double residual_a = 0.0;
  double residual_b = 0.0;
  std::vector<double> residuals_c;
  std::vector<int> consecutive_orders;
  Verdict verdict = Verdict::insufficient_data;
  double tol = 0.0;

  // Residual trajectories over the input sequence; trend_c[i] follows order consecutive_orders[i].
  std::vector<double> trend_a;
  std::vector<double> trend_b;
  std::vector<std::vector<double>> trend_c;

  // Raw statistics, for display and golden comparisons.
  QPolynomial q;
  ConditionValues target_values;
  std::vector<ConditionValues> sequence_values;
  double b_multiplier = 1.0;
};

/// Applies the criterion to a sequence of spectra with optional per-element
/// Gaussian (or semicircular) sizes; an empty `sds` means all zero.
CriterionReport assess_sequence(const std::vector<Spectrum>& spectra, const std::vector<double>& sds,
                                const LimitTarget& target, double tol,
                                std::optional<int> start_order = std::nullopt);

/// Solves sum_i mu_i^r m_i = p_r over the given consecutive orders.
std::vector<double> recover_multiplicities(const std::vector<double>& power_sums,
                                           const std::vector<int>& orders,
                                           const std::vector<double>& candidate_values);

struct TransferResult {
  CriterionReport classical;
  CriterionReport free;
  bool agree = false;
};

/// Runs the criterion on both sides. The classical target must carry
/// mu0 = sqrt(2) * lambda0; the free target uses mu0 = lambda0 and the same
/// eigenvalues.
TransferResult transfer_check(const std::vector<Spectrum>& spectra, double lambda0,
                              const LimitTarget& classical_target, double tol);

}  // namespace chaos
