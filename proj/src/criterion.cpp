#include "chaos/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chaos/errors.hpp"
#include "chaos/numeric.hpp"

namespace chaos {

namespace {

constexpr double kMaxCondition = 1e12;

bool non_increasing_tail(const std::vector<double>& r, std::size_t window, double slack) {
  for (std::size_t i = r.size() - window; i + 1 < r.size(); ++i)
    if (r[i + 1] > r[i] + slack) return false;
  return true;
}

bool non_decreasing_tail(const std::vector<double>& r, std::size_t window, double slack) {
  for (std::size_t i = r.size() - window; i + 1 < r.size(); ++i)
    if (r[i + 1] < r[i] - slack) return false;
  return true;
}

}  // namespace

LimitTarget::LimitTarget(Flavor flavor, double mu0, std::vector<double> distinct_values,
                         std::vector<int> multiplicities)
    : flavor_(flavor), mu0_(mu0), values_(std::move(distinct_values)), mults_(std::move(multiplicities)) {
  if (!(mu0_ >= 0.0) || !std::isfinite(mu0_)) throw InputError("target mu0 must be finite and >= 0");
  if (values_.size() != mults_.size())
    throw InputError("target values and multiplicities differ in length");
  double energy = mu0_;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] == 0.0)
      throw InputError("target eigenvalues must be finite and nonzero");
    if (mults_[i] <= 0) throw InputError("target multiplicities must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (values_[j] == values_[i]) throw InputError("target eigenvalues must be pairwise distinct");
    energy += mults_[i] * values_[i] * values_[i];
  }
  if (!(energy > 0.0)) throw InputError("target must have mu0 > 0 or a nonzero eigenvalue");
}

LimitTarget LimitTarget::zero_law(Flavor flavor) {
  LimitTarget t;
  t.flavor_ = flavor;
  return t;
}

LimitTarget LimitTarget::gaussian(double sd) { return {Flavor::classical, sd, {}, {}}; }
LimitTarget LimitTarget::semicircular(double sd) { return {Flavor::free, sd, {}, {}}; }
LimitTarget LimitTarget::centered_chi_square(int degrees) {
  return {Flavor::classical, 0.0, {1.0}, {degrees}};
}
LimitTarget LimitTarget::centered_free_poisson(int rate) { return {Flavor::free, 0.0, {1.0}, {rate}}; }
LimitTarget LimitTarget::tetilla() { return {Flavor::free, 0.0, {1.0, -1.0}, {1, 1}}; }

int LimitTarget::rank() const noexcept {
  int r = 0;
  for (int m : mults_) r += m;
  return r;
}

Spectrum LimitTarget::expanded_spectrum() const {
  std::vector<double> v;
  for (std::size_t i = 0; i < values_.size(); ++i)
    v.insert(v.end(), static_cast<std::size_t>(mults_[i]), values_[i]);
  return Spectrum(std::move(v));
}

LimitTarget LimitTarget::with_flavor(Flavor flavor, double mu0) const {
  if (mu0 == 0.0 && values_.empty()) return zero_law(flavor);
  return LimitTarget(flavor, mu0, values_, mults_);
}

double QPolynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QPolynomial build_q(const LimitTarget& target) {
  const int low = target.mu0() != 0.0 ? 4 : 2;
  std::vector<double> c(static_cast<std::size_t>(low) + 1, 0.0);
  c[static_cast<std::size_t>(low)] = 1.0;
  for (double mu : target.distinct_values()) {
    // multiply by x^2 - 2 mu x + mu^2
    std::vector<double> next(c.size() + 2, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += mu * mu * c[k];
      next[k + 1] += -2.0 * mu * c[k];
      next[k + 2] += c[k];
    }
    c.swap(next);
  }
  return QPolynomial{std::move(c)};
}

int required_order(const LimitTarget& target, const QPolynomial& q, int start_order) {
  return std::max({2, q.degree(), start_order + static_cast<int>(target.a()) - 1});
}

double b_multiplier(Flavor flavor, const QPolynomial& q) noexcept {
  const int d = q.degree();
  if (flavor == Flavor::free || d < 3) return 1.0;
  return factorial(d - 1) * ipow(2.0, d - 1);
}

ConditionValues condition_values(const CumulantVector& cumulants, const LimitTarget& target,
                                 const QPolynomial& q, std::optional<int> start_order) {
  if (cumulants.flavor() != target.flavor()) {
    throw InputError("cumulant flavor " + std::string(to_string(cumulants.flavor())) +
                     " does not match target flavor " + std::string(to_string(target.flavor())));
  }
  const int start = start_order.value_or(target.min_start_order());
  if (start < target.min_start_order()) {
    std::ostringstream msg;
    msg << "start order " << start << " is below the admissible minimum " << target.min_start_order();
    throw InputError(msg.str());
  }
  const int needed = required_order(target, q, start);
  if (cumulants.r_max() < needed) {
    std::ostringstream msg;
    msg << "cumulants up to order " << needed << " are required, got r_max " << cumulants.r_max();
    throw InputError(msg.str());
  }

  ConditionValues out;
  out.a = cumulants[2];
  KahanSum b;
  for (int r = 3; r <= q.degree(); ++r) {
    const double coef = q.coefficient(r);
    if (coef == 0.0) continue;
    const double k = cumulants[r];
    b += target.flavor() == Flavor::classical ? coef * k / (factorial(r - 1) * ipow(2.0, r - 1))
                                              : coef * k;
  }
  out.b = b.value();
  for (std::size_t i = 0; i < target.a(); ++i) {
    const int r = start + static_cast<int>(i);
    out.orders.push_back(r);
    out.c.push_back(cumulants[r]);
  }
  return out;
}

ConditionValues target_condition_values(const LimitTarget& target, const QPolynomial& q,
                                        int start_order) {
  const int r_max = required_order(target, q, start_order);
  const auto k = cumulants(target.flavor(), target.expanded_spectrum(), target.mu0(), r_max);
  return condition_values(k, target, q, start_order);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::insufficient_data: return "insufficient_data";
  }
  return "insufficient_data";
}

CriterionReport assess_sequence(const std::vector<Spectrum>& spectra, const std::vector<double>& sds,
                                const LimitTarget& target, double tol,
                                std::optional<int> start_order) {
  if (spectra.empty()) throw InputError("criterion needs a nonempty sequence of spectra");
  if (!(tol > 0.0)) throw InputError("criterion tolerance must be > 0");
  if (!sds.empty() && sds.size() != spectra.size())
    throw InputError("sds must be empty or match the number of spectra");

  CriterionReport report;
  report.flavor = target.flavor();
  report.tol = tol;
  report.q = build_q(target);
  report.b_multiplier = b_multiplier(target.flavor(), report.q);
  const int start = start_order.value_or(target.min_start_order());
  const int r_max = required_order(target, report.q, start);
  report.target_values = target_condition_values(target, report.q, start);
  report.consecutive_orders = report.target_values.orders;
  report.trend_c.assign(target.a(), {});

  for (std::size_t n = 0; n < spectra.size(); ++n) {
    const double sd = sds.empty() ? 0.0 : sds[n];
    const auto k = cumulants(target.flavor(), spectra[n], sd, r_max);
    auto v = condition_values(k, target, report.q, start);
    report.trend_a.push_back(std::abs(v.a - report.target_values.a));
    report.trend_b.push_back(std::abs(v.b - report.target_values.b));
    for (std::size_t i = 0; i < target.a(); ++i)
      report.trend_c[i].push_back(std::abs(v.c[i] - report.target_values.c[i]));
    report.sequence_values.push_back(std::move(v));
  }
  report.residual_a = report.trend_a.back();
  report.residual_b = report.trend_b.back();
  for (const auto& t : report.trend_c) report.residuals_c.push_back(t.back());

  std::vector<const std::vector<double>*> trends{&report.trend_a, &report.trend_b};
  for (const auto& t : report.trend_c) trends.push_back(&t);

  const std::size_t len = spectra.size();
  const std::size_t window =
      std::min(len, std::max<std::size_t>(3, (len + 3) / 4));
  const double slack = 1e-9 * tol;

  bool all_small = true;
  bool all_settling = true;
  bool diverging = false;
  for (const auto* t : trends) {
    all_small = all_small && t->back() < tol;
    all_settling = all_settling && non_increasing_tail(*t, window, slack);
    diverging = diverging || (t->back() > 10.0 * tol && non_decreasing_tail(*t, window, slack));
  }
  if (all_small && all_settling)
    report.verdict = Verdict::consistent;
  else if (diverging)
    report.verdict = Verdict::inconsistent;
  else
    report.verdict = Verdict::insufficient_data;
  return report;
}

std::vector<double> recover_multiplicities(const std::vector<double>& power_sums,
                                           const std::vector<int>& orders,
                                           const std::vector<double>& candidate_values) {
  const std::size_t a = candidate_values.size();
  if (a == 0) throw InputError("multiplicity recovery needs at least one candidate value");
  if (power_sums.size() != a || orders.size() != a)
    throw InputError("power sums, orders and candidate values must have equal length");
  for (std::size_t i = 1; i < a; ++i)
    if (orders[i] != orders[i - 1] + 1) throw InputError("orders must be consecutive integers");
  for (std::size_t i = 0; i < a; ++i) {
    if (candidate_values[i] == 0.0 || !std::isfinite(candidate_values[i]))
      throw InputError("candidate values must be finite and nonzero");
    for (std::size_t j = 0; j < i; ++j)
      if (candidate_values[i] == candidate_values[j])
        throw InputError("candidate values must be pairwise distinct");
  }

  // A[r][i] = mu_i^{order_r}; solve with partial pivoting, keeping the
  // factors to form A^{-1} for a 1-norm condition estimate.
  std::vector<double> lu(a * a);
  for (std::size_t r = 0; r < a; ++r)
    for (std::size_t i = 0; i < a; ++i) lu[r * a + i] = ipow(candidate_values[i], orders[r]);

  double norm_a = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    double col = 0.0;
    for (std::size_t r = 0; r < a; ++r) col += std::abs(lu[r * a + i]);
    norm_a = std::max(norm_a, col);
  }

  std::vector<std::size_t> perm(a);
  for (std::size_t i = 0; i < a; ++i) perm[i] = i;
  for (std::size_t k = 0; k < a; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < a; ++r)
      if (std::abs(lu[r * a + k]) > std::abs(lu[piv * a + k])) piv = r;
    if (lu[piv * a + k] == 0.0)
      throw ConditioningError("power-sum system is singular", std::numeric_limits<double>::infinity());
    if (piv != k) {
      for (std::size_t c = 0; c < a; ++c) std::swap(lu[k * a + c], lu[piv * a + c]);
      std::swap(perm[k], perm[piv]);
    }
    for (std::size_t r = k + 1; r < a; ++r) {
      const double f = lu[r * a + k] / lu[k * a + k];
      lu[r * a + k] = f;
      for (std::size_t c = k + 1; c < a; ++c) lu[r * a + c] -= f * lu[k * a + c];
    }
  }

  auto solve = [&](std::vector<double> rhs) {
    std::vector<double> y(a);
    for (std::size_t r = 0; r < a; ++r) y[r] = rhs[perm[r]];
    for (std::size_t r = 0; r < a; ++r)
      for (std::size_t c = 0; c < r; ++c) y[r] -= lu[r * a + c] * y[c];
    for (std::size_t r = a; r-- > 0;) {
      for (std::size_t c = r + 1; c < a; ++c) y[r] -= lu[r * a + c] * y[c];
      y[r] /= lu[r * a + r];
    }
    return y;
  };

  double norm_inv = 0.0;
  for (std::size_t j = 0; j < a; ++j) {
    std::vector<double> e(a, 0.0);
    e[j] = 1.0;
    const auto col = solve(e);
    double s = 0.0;
    for (double x : col) s += std::abs(x);
    norm_inv = std::max(norm_inv, s);
  }
  const double condition = norm_a * norm_inv;
  if (!(condition <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "power-sum system is numerically singular (condition estimate " << condition << ")";
    throw ConditioningError(msg.str(), condition);
  }
  return solve(power_sums);
}

TransferResult transfer_check(const std::vector<Spectrum>& spectra, double lambda0,
                              const LimitTarget& classical_target, double tol) {
  if (classical_target.flavor() != Flavor::classical)
    throw InputError("transfer check expects a classical target");
  if (!(lambda0 >= 0.0)) throw InputError("lambda0 must be >= 0");
  const double expected_mu0 = std::sqrt(2.0) * lambda0;
  if (std::abs(classical_target.mu0() - expected_mu0) > 1e-12 * std::max(1.0, expected_mu0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "classical target mu0 " << classical_target.mu0() << " must equal sqrt(2)*lambda0 = "
        << expected_mu0;
    throw InputError(msg.str());
  }
  const LimitTarget free_target = classical_target.with_flavor(Flavor::free, lambda0);

  TransferResult out;
  out.classical = assess_sequence(spectra, {}, classical_target, tol);
  out.free = assess_sequence(spectra, {}, free_target, tol);
  out.agree = out.classical.verdict == out.free.verdict;
  return out;
}

}  // namespace chaos
