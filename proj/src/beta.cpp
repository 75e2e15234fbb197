#include "orthlip/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orthlip {

namespace {

void check_j(const ExponentVector& p, int j) {
  const int n = static_cast<int>(p.dim());
  if (j < 2 || j > n) {
    throw InvalidArgument("outer index j = " + std::to_string(j) + " must lie in {2, ..., " +
                          std::to_string(n) + "}");
  }
}

void check_q(const ExponentVector& p, const QSequence& q) {
  if (q.q.size() != p.dim()) throw InvalidArgument("q sequence does not match the exponent vector");
}

bool at_target(const std::vector<double>& beta, const std::vector<double>& target) {
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (std::abs(beta[k] - target[k]) > kBetaFixpointTol * std::abs(target[k])) return false;
  }
  return true;
}

// p_i with one-based axis i
double axis_p(const ExponentVector& p, int i) { return p[static_cast<std::size_t>(i - 1)]; }

}  // namespace

double beta_delta(const BetaState& s, const ExponentVector& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.beta.size(); ++k) {
    d = std::min(d, s.beta[k] / axis_p(p, s.first_axis() + static_cast<int>(k)));
  }
  return d;
}

BetaState beta_init(const ExponentVector& p, const QSequence& q, int j) {
  check_j(p, j);
  check_q(p, q);
  const int n = static_cast<int>(p.dim());
  BetaState s;
  s.j = j;
  s.level = 0;
  const double cap = q.order(static_cast<std::size_t>(j - 2));
  const double q_prev = q.order(static_cast<std::size_t>(j - 1));
  const double q_last = q.order(static_cast<std::size_t>(n));
  s.beta.push_back(axis_p(p, j - 1) * std::min(cap, q_prev * q_last));
  for (int i = j; i <= n; ++i) s.beta.push_back(axis_p(p, i) * q_prev);
  for (int i = j - 1; i <= n; ++i) s.target.push_back(axis_p(p, i) * cap);
  s.stabilized = at_target(s.beta, s.target);
  return s;
}

BetaState beta_step(const BetaState& s, const ExponentVector& p, const QSequence& q) {
  check_j(p, s.j);
  check_q(p, q);
  const int n = static_cast<int>(p.dim());
  const int first = s.first_axis();
  if (s.beta.size() != static_cast<std::size_t>(n - first + 1)) {
    throw InvalidArgument("beta state has the wrong number of components");
  }
  const double cap = q.order(static_cast<std::size_t>(s.j - 2));

  BetaState next = s;
  next.level = s.level + 1;
  auto idx = [first](int i) { return static_cast<std::size_t>(i - first); };
  for (int i = n; i >= first; --i) {
    ExtendedReal m(cap);
    for (int k = first; k < i; ++k) m = min(m, over_p_minus_two(s.beta[idx(k)], axis_p(p, k)));
    for (int k = i + 1; k <= n; ++k) {
      m = min(m, over_p_minus_two(next.beta[idx(k)], axis_p(p, k)));
    }
    next.beta[idx(i)] = axis_p(p, i) * m.value();
  }
  next.stabilized = at_target(next.beta, next.target);
  return next;
}

BetaTrace beta_run(const ExponentVector& p, double q0, int j, int max_levels) {
  if (max_levels < 1) throw InvalidArgument("max_levels must be >= 1");
  const QSequence q = compute_q_sequence(p, q0);
  BetaTrace trace;
  trace.states.push_back(beta_init(p, q, j));
  trace.delta.push_back(beta_delta(trace.states.back(), p));
  while (!trace.states.back().stabilized) {
    if (trace.states.back().level >= max_levels) {
      trace.ell0 = -1;
      throw NotStabilizedError("beta recursion did not reach p_i q_{j-2} within " +
                                   std::to_string(max_levels) + " levels",
                               std::move(trace));
    }
    trace.states.push_back(beta_step(trace.states.back(), p, q));
    trace.delta.push_back(beta_delta(trace.states.back(), p));
  }
  trace.ell0 = trace.states.back().level;
  return trace;
}

}  // namespace orthlip
