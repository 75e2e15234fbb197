// Internal: constant-coefficient Dirichlet solver used as a preconditioner.
#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "orthlip/grid.hpp"

namespace orthlip::detail {

/// Solves sum_i a_i (-delta_i^2) z = r on the interior nodes of a grid with
/// z = 0 on the boundary, by a sine transform (DST-I) along every axis.
class FastPoisson {
 public:
  explicit FastPoisson(const Grid& g);
  ~FastPoisson();
  FastPoisson(const FastPoisson&) = delete;
  FastPoisson& operator=(const FastPoisson&) = delete;

  /// Axis coefficients; each must be positive.
  void set_coefficients(const std::array<double, 3>& a);
  /// Diagonal of the operator at an interior node.
  double diagonal() const noexcept { return diag_; }
  /// rhs and out hold one value per grid node; boundary entries of rhs are
  /// ignored and those of out are set to zero. rhs and out may alias.
  void solve(const std::vector<double>& rhs, std::vector<double>& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double diag_ = 0.0;
};

}  // namespace orthlip::detail
