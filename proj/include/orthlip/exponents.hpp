#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace orthlip {

/// Growth exponents p = (p_1, ..., p_N) of the orthotropic functional
/// sum_i (1/p_i) |u_{x_i}|^{p_i}. Always ordered 2 <= p_1 <= ... <= p_N, N >= 2.
class ExponentVector {
 public:
  explicit ExponentVector(std::vector<double> p);

  std::size_t dim() const noexcept { return p_.size(); }
  /// Zero-based access: operator[](0) is p_1.
  double operator[](std::size_t i) const { return p_[i]; }
  double min() const noexcept { return p_.front(); }
  double max() const noexcept { return p_.back(); }
  bool standard_growth() const noexcept { return p_.front() == p_.back(); }
  std::span<const double> values() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// A real number or +infinity. Used for p/(p-2), which is +infinity at p = 2.
class ExtendedReal {
 public:
  constexpr explicit ExtendedReal(double v) : value_(v), infinite_(false) {}
  static constexpr ExtendedReal infinity() { return ExtendedReal(); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; throws InvalidArgument when infinite.
  double value() const;

  friend constexpr bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  constexpr ExtendedReal() : value_(0.0), infinite_(true) {}
  double value_;
  bool infinite_;
};

constexpr ExtendedReal min(const ExtendedReal& a, const ExtendedReal& b) {
  return b < a ? b : a;
}
/// min{x, bound} for a finite bound is always finite.
double min_finite(const ExtendedReal& x, double bound);

/// t / (p - 2) with the convention that it is +infinity at p = 2.
ExtendedReal over_p_minus_two(double t, double p);

/// Integrability orders q_j = min{p_j/(p_j-2), q0}.
struct QSequence {
  double q0 = 2.0;
  std::vector<double> q;  ///< q[0] is q_1

  /// order(0) is q0 and order(k) is q_k for 1 <= k <= N.
  double order(std::size_t k) const { return k == 0 ? q0 : q.at(k - 1); }
};

QSequence compute_q_sequence(const ExponentVector& p, double q0);

/// Exponent ladder of the Moser iteration for N >= 3.
///
/// gamma_j = p_N + 2^{j+2} - 2, tau_j is the Lebesgue interpolation weight
/// between gamma_{j-1} and (2*/2)(gamma_j + p_1 - p_N), and
/// 1 + eps_j = tau_j * ((gamma_j + p_1 - p_N) / ((1 - tau_j) gamma_j))'.
/// theta is the product of (1 + eps_j) over J <= j <= jmax.
class MoserSchedule {
 public:
  std::size_t dim = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  double sobolev2star = 0.0;
  int j0 = 0;
  int j1 = 0;
  int J = 0;
  int jmax = 0;
  double theta = 1.0;
  /// Upper estimate of log(full product / truncated product), from the
  /// geometric asymptotics of eps_j past jmax.
  double theta_tail = 0.0;

  double gamma(int j) const;  ///< 0 <= j <= jmax
  double tau(int j) const;    ///< j0 <= j <= jmax
  double eps(int j) const;    ///< J <= j <= jmax
  /// (1 - tau_j) gamma_j / (gamma_j + p_1 - p_N), for j0 <= j <= jmax.
  double absorption_ratio(int j) const;

  std::span<const double> gammas() const noexcept { return gamma_; }

 private:
  friend MoserSchedule compute_moser_schedule(const ExponentVector&, int);
  std::vector<double> gamma_;
  std::vector<double> tau_;  // offset by j0
  std::vector<double> eps_;  // offset by J
};

/// gamma_j = p_N + 2^{j+2} - 2; valid for any integer j >= -1.
double moser_gamma(double p_max, int j);

/// Smallest natural j with j > log2(arg) - 2, where log2(t) = -inf for t <= 0.
int first_index_above_log(double arg);

MoserSchedule compute_moser_schedule(const ExponentVector& p, int jmax);

/// Smallest jmax accepted by compute_moser_schedule: J + 10.
int minimum_jmax(const ExponentVector& p);

/// lim 2^j eps_j = N (p_N - p_1) / 8.
double epsilon_asymptote(const ExponentVector& p);

/// Data of the hole-filling hypothesis
///   Z(t) <= A/(s-t)^alpha0 + B/(s-t)^beta0 + C + theta Z(s),  r <= t < s <= R.
struct HoleFilling {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  double theta = 0.0;
};

/// Midpoint of the admissible interval (theta^{1/alpha0}, 1).
double default_lambda(double theta, double alpha0);

/// Closed-form conclusion of the hole-filling lemma:
///   Z(r) <= (1-lambda)^{-alpha0} lambda^{alpha0}/(lambda^{alpha0} - theta)
///           * [A/(R-r)^alpha0 + B/(R-r)^beta0 + C].
double iteration_lemma_bound(const HoleFilling& h, double r, double R,
                             std::optional<double> lambda = std::nullopt);

}  // namespace orthlip
