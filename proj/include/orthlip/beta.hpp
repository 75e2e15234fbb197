#pragma once

#include <cstddef>
#include <vector>

#include "orthlip/error.hpp"
#include "orthlip/exponents.hpp"

namespace orthlip {

/// One level of the downward integrability recursion for a fixed outer index j.
///
/// Components are stored for the one-based axes i = j-1, ..., N, so beta[0]
/// belongs to axis j-1. The fixpoint of the recursion is target_i = p_i q_{j-2}.
struct BetaState {
  int j = 2;
  int level = 0;
  std::vector<double> beta;
  std::vector<double> target;
  bool stabilized = false;

  int first_axis() const noexcept { return j - 1; }
  /// Component for one-based axis i in [j-1, N].
  double at(int i) const { return beta.at(static_cast<std::size_t>(i - first_axis())); }
};

/// Full run of the recursion from level 0 to the first level equal to the target.
struct BetaTrace {
  std::vector<BetaState> states;
  int ell0 = 0;
  /// delta[l] = min_k beta_k^{(l)} / p_k
  std::vector<double> delta;
};

/// Raised by beta_run when max_levels is reached without reaching the fixpoint.
class NotStabilizedError : public Error {
 public:
  NotStabilizedError(const std::string& what, BetaTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const BetaTrace& partial() const noexcept { return partial_; }

 private:
  BetaTrace partial_;
};

/// Relative tolerance used to decide that a component sits at its target.
inline constexpr double kBetaFixpointTol = 1e-12;

BetaState beta_init(const ExponentVector& p, const QSequence& q, int j);

/// One sweep i = N, N-1, ..., j-1. Component i reads the previous level for
/// axes below i and the freshly computed level for axes above i.
BetaState beta_step(const BetaState& s, const ExponentVector& p, const QSequence& q);

BetaTrace beta_run(const ExponentVector& p, double q0, int j, int max_levels = 10000);

/// min_k beta_k / p_k over the stored components.
double beta_delta(const BetaState& s, const ExponentVector& p);

}  // namespace orthlip
