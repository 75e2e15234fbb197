#include "orthlip/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orthlip/error.hpp"

namespace orthlip {

ExponentVector::ExponentVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.size() < 2) {
    throw InvalidArgument("exponent vector needs N >= 2 entries, got " +
                          std::to_string(p_.size()));
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i]) || p_[i] < 2.0) {
      std::ostringstream os;
      os << "exponent p_" << i + 1 << " = " << p_[i] << " must be finite and >= 2";
      throw InvalidArgument(os.str());
    }
    if (i > 0 && p_[i] < p_[i - 1]) {
      std::ostringstream os;
      os << "exponents must be ordered p_1 <= ... <= p_N (p_" << i << " = " << p_[i - 1]
         << " > p_" << i + 1 << " = " << p_[i] << ")";
      throw InvalidArgument(os.str());
    }
  }
}

double ExtendedReal::value() const {
  if (infinite_) throw InvalidArgument("value() called on +infinity");
  return value_;
}

double min_finite(const ExtendedReal& x, double bound) {
  return x.is_infinite() ? bound : std::min(x.value(), bound);
}

ExtendedReal over_p_minus_two(double t, double p) {
  if (p == 2.0) return ExtendedReal::infinity();
  return ExtendedReal(t / (p - 2.0));
}

QSequence compute_q_sequence(const ExponentVector& p, double q0) {
  if (!(q0 >= 2.0) || !std::isfinite(q0)) {
    throw InvalidArgument("q0 must be finite and >= 2");
  }
  QSequence out;
  out.q0 = q0;
  out.q.reserve(p.dim());
  for (double pj : p.values()) out.q.push_back(min_finite(over_p_minus_two(pj, pj), q0));
  return out;
}

double moser_gamma(double p_max, int j) { return p_max + std::ldexp(1.0, j + 2) - 2.0; }

int first_index_above_log(double arg) {
  if (!(arg > 0.0)) return 0;  // log2(t) = -inf for t <= 0
  const double bound = std::log2(arg) - 2.0;
  if (bound < 0.0) return 0;
  return static_cast<int>(std::floor(bound)) + 1;
}

namespace {

struct LadderIndices {
  int j0, j1, J;
};

LadderIndices ladder_indices(const ExponentVector& p) {
  const double n = static_cast<double>(p.dim());
  const double a0 = (n - 2.0) / 2.0 * (p.max() - 2.0) - n / 2.0 * (p.min() - 2.0);
  const double a1 = (n - 2.0) * (p.max() - 2.0) - n * (p.min() - 2.0);
  LadderIndices idx{};
  idx.j0 = first_index_above_log(a0);
  idx.j1 = first_index_above_log(a1);
  idx.J = 1 + std::max(idx.j0, idx.j1);
  return idx;
}

void require_moser_dim(const ExponentVector& p) {
  if (p.dim() < 3) {
    throw InvalidArgument("the Moser schedule needs N >= 3 (finite Sobolev exponent), got N = " +
                          std::to_string(p.dim()));
  }
}

}  // namespace

int minimum_jmax(const ExponentVector& p) {
  require_moser_dim(p);
  return ladder_indices(p).J + 10;
}

double MoserSchedule::gamma(int j) const {
  if (j < 0 || j > jmax) throw InvalidArgument("gamma index out of range");
  return gamma_[static_cast<std::size_t>(j)];
}

double MoserSchedule::tau(int j) const {
  if (j < j0 || j > jmax) throw InvalidArgument("tau_j is defined for j0 <= j <= jmax");
  return tau_[static_cast<std::size_t>(j - j0)];
}

double MoserSchedule::eps(int j) const {
  if (j < J || j > jmax) throw InvalidArgument("eps_j is defined for J <= j <= jmax");
  return eps_[static_cast<std::size_t>(j - J)];
}

double MoserSchedule::absorption_ratio(int j) const {
  const double g = gamma(j);
  return (1.0 - tau(j)) * g / (g + p_min - p_max);
}

MoserSchedule compute_moser_schedule(const ExponentVector& p, int jmax) {
  require_moser_dim(p);
  const LadderIndices idx = ladder_indices(p);
  if (jmax < idx.J + 10) {
    throw InvalidArgument("jmax = " + std::to_string(jmax) + " is below J + 10 = " +
                          std::to_string(idx.J + 10));
  }
  if (jmax > 1000) throw InvalidArgument("jmax above 1000 overflows the gamma ladder");

  MoserSchedule s;
  s.dim = p.dim();
  s.p_min = p.min();
  s.p_max = p.max();
  const double n = static_cast<double>(p.dim());
  s.sobolev2star = 2.0 * n / (n - 2.0);
  s.j0 = idx.j0;
  s.j1 = idx.j1;
  s.J = idx.J;
  s.jmax = jmax;

  const double half_star = s.sobolev2star / 2.0;
  const double gap = p.max() - p.min();
  s.gamma_.resize(static_cast<std::size_t>(jmax) + 1);
  for (int j = 0; j <= jmax; ++j) s.gamma_[static_cast<std::size_t>(j)] = moser_gamma(p.max(), j);

  for (int j = s.j0; j <= jmax; ++j) {
    const double g = moser_gamma(p.max(), j);
    const double g_prev = moser_gamma(p.max(), j - 1);
    const double target = half_star * (g - gap);
    s.tau_.push_back(g_prev / g * (target - g) / (target - g_prev));
  }

  // eps_j = (d/g)(1 - tau)/(tau - d/g) with d = p_N - p_1; this is the
  // conjugate-exponent expression rewritten without cancellation.
  double log_theta = 0.0;
  for (int j = s.J; j <= jmax; ++j) {
    const double t = s.tau(j);
    const double d_over_g = gap / moser_gamma(p.max(), j);
    const double e = d_over_g * (1.0 - t) / (t - d_over_g);
    s.eps_.push_back(e);
    log_theta += std::log1p(e);
  }
  s.theta = std::exp(log_theta);

  // Past jmax, eps_j ~ c 2^{-j}; the geometric tail sums to c 2^{-jmax}.
  // A factor 2 covers the approach of 2^j eps_j to its limit.
  const double c = std::max(epsilon_asymptote(p), std::ldexp(s.eps(jmax), jmax));
  s.theta_tail = 2.0 * c * std::ldexp(1.0, -jmax);
  return s;
}

double epsilon_asymptote(const ExponentVector& p) {
  require_moser_dim(p);
  return static_cast<double>(p.dim()) * (p.max() - p.min()) / 8.0;
}

double default_lambda(double theta, double alpha0) {
  return 0.5 * (1.0 + std::pow(theta, 1.0 / alpha0));
}

double iteration_lemma_bound(const HoleFilling& h, double r, double R,
                             std::optional<double> lambda) {
  if (h.A < 0.0 || h.B < 0.0 || h.C < 0.0) throw InvalidArgument("A, B, C must be >= 0");
  if (!(h.beta0 > 0.0) || h.alpha0 < h.beta0) {
    throw InvalidArgument("exponents must satisfy alpha0 >= beta0 > 0");
  }
  if (!(h.theta >= 0.0 && h.theta < 1.0)) throw InvalidArgument("theta must lie in [0, 1)");
  if (!(0.0 < r && r < R)) throw InvalidArgument("radii must satisfy 0 < r < R");
  const double lam = lambda.value_or(default_lambda(h.theta, h.alpha0));
  const double lower = std::pow(h.theta, 1.0 / h.alpha0);
  if (!(lam > lower && lam < 1.0)) {
    throw InvalidArgument("lambda must lie in (theta^{1/alpha0}, 1)");
  }
  const double la = std::pow(lam, h.alpha0);
  const double factor = la / (std::pow(1.0 - lam, h.alpha0) * (la - h.theta));
  const double d = R - r;
  return factor * (h.A / std::pow(d, h.alpha0) + h.B / std::pow(d, h.beta0) + h.C);
}

}  // namespace orthlip
