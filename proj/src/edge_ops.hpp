// Internal helper shared by the energy, the residual and the solver.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "orthlip/grid.hpp"

namespace orthlip::detail {

/// Weight of each lattice edge in the discrete energy: the cell volume, halved
/// once for every other axis on whose face the edge lies. Summing
/// w_e g((u_b - u_a)/h) over edges equals averaging g over the parallel edges
/// of every cell.
class EdgeLoop {
 public:
  explicit EdgeLoop(const Grid& g) : dim_(g.dim()), vol_(g.cell_volume()) {
    for (std::size_t d = 0; d < 3; ++d) {
      n_[d] = d < dim_ ? g.nodes(d) : 1;
      stride_[d] = d < dim_ ? g.stride(d) : 0;
      inv_h_[d] = d < dim_ ? 1.0 / g.h(d) : 0.0;
      face_[d].assign(n_[d], 1.0);
      if (d < dim_) {
        face_[d].front() = 0.5;
        face_[d].back() = 0.5;
      }
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  double inv_h(std::size_t axis) const noexcept { return inv_h_[axis]; }
  std::size_t stride(std::size_t axis) const noexcept { return stride_[axis]; }

  /// fn(a, b, weight) for every edge a -> b = a + stride(axis).
  template <class Fn>
  void for_axis(std::size_t axis, Fn&& fn) const {
    const std::size_t s = stride_[axis];
    for (std::size_t i2 = 0; i2 < n_[2]; ++i2) {
      if (axis == 2 && i2 + 1 == n_[2]) continue;
      const double w2 = axis == 2 ? vol_ : vol_ * face_[2][i2];
      for (std::size_t i1 = 0; i1 < n_[1]; ++i1) {
        if (axis == 1 && i1 + 1 == n_[1]) continue;
        const double w1 = axis == 1 ? w2 : w2 * face_[1][i1];
        const std::size_t row = i2 * stride_[2] + i1 * stride_[1];
        const std::size_t n0 = axis == 0 ? n_[0] - 1 : n_[0];
        for (std::size_t i0 = 0; i0 < n0; ++i0) {
          const double w = axis == 0 ? w1 : w1 * face_[0][i0];
          const std::size_t a = row + i0;
          fn(a, a + s, w);
        }
      }
    }
  }

 private:
  std::size_t dim_;
  double vol_;
  std::array<std::size_t, 3> n_{};
  std::array<std::size_t, 3> stride_{};
  std::array<double, 3> inv_h_{};
  std::array<std::vector<double>, 3> face_;
};

}  // namespace orthlip::detail
