#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace orthlip {

using Point = std::array<double, 3>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Tensor-product node lattice on a box in 2 or 3 dimensions. Nodes are
/// numbered with axis 0 varying fastest.
class Grid {
 public:
  Grid(std::vector<Interval> extent, std::vector<std::size_t> nodes);
  /// [0,1]^dim with the same node count on every axis.
  static Grid unit(std::size_t dim, std::size_t nodes_per_axis);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nodes(std::size_t axis) const { return n_.at(axis); }
  double h(std::size_t axis) const { return h_.at(axis); }
  double max_h() const noexcept;
  const Interval& extent(std::size_t axis) const { return extent_.at(axis); }
  std::size_t stride(std::size_t axis) const { return stride_.at(axis); }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double domain_volume() const noexcept;

  std::array<std::size_t, 3> multi_index(std::size_t flat) const noexcept;
  std::size_t flat_index(const std::array<std::size_t, 3>& idx) const noexcept;
  Point coord(std::size_t flat) const noexcept;
  bool is_boundary(std::size_t flat) const noexcept;
  /// Node lies on the lower or upper face of the given axis.
  bool on_face(std::size_t flat, std::size_t axis) const noexcept;
  /// Distance from a point to the domain boundary (negative outside).
  double distance_to_boundary(const Point& x) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.extent_ == b.extent_ && a.n_ == b.n_;
  }

 private:
  std::size_t dim_;
  std::array<Interval, 3> extent_{};
  std::array<std::size_t, 3> n_{1, 1, 1};
  std::array<double, 3> h_{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> stride_{0, 0, 0};
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

/// Scalar samples on every node of a grid.
class NodalField {
 public:
  explicit NodalField(Grid grid, double fill = 0.0);
  NodalField(Grid grid, std::vector<double> values);
  static NodalField sample(const Grid& grid, const std::function<double(const Point&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  double max_abs() const noexcept;
  double max_abs_boundary() const noexcept;
  double max_abs_interior() const noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Ball, annulus or box inside the domain; membership of quadrature cells is
/// decided by the cell center.
class SubRegion {
 public:
  enum class Kind { Ball, Annulus, Box };

  static SubRegion ball(const Point& center, double radius);
  static SubRegion annulus(const Point& center, double inner, double outer);
  static SubRegion box(const Point& lo, const Point& hi);
  /// The whole domain of a grid.
  static SubRegion domain(const Grid& g);

  Kind kind() const noexcept { return kind_; }
  const Point& center() const noexcept { return center_; }
  double inner_radius() const noexcept { return inner_; }
  double outer_radius() const noexcept { return outer_; }
  bool contains(const Point& x, std::size_t dim) const noexcept;
  /// Smallest distance from the region to the domain boundary.
  double clearance(const Grid& g) const noexcept;

 private:
  Kind kind_ = Kind::Box;
  Point center_{};
  Point lo_{};
  Point hi_{};
  double inner_ = 0.0;
  double outer_ = 0.0;
};

/// Central differences at nodes interior to the axis, one-sided on its faces.
NodalField discrete_gradient(const NodalField& u, std::size_t axis);

/// u_{x_i x_j}: second differences for i == j, composed central first
/// differences otherwise. Values are only meaningful two nodes away from the
/// boundary; nodes on the boundary hold zero.
NodalField discrete_second_derivative(const NodalField& u, std::size_t i, std::size_t j);

/// Midpoint rule over cells whose center lies in the region; the cell value is
/// the mean of its corner samples. Throws when no cell is selected.
double integrate(const NodalField& f, const SubRegion& region);
/// Total volume of the selected cells.
double region_volume(const Grid& g, const SubRegion& region);

/// (sum_cells |f|^q vol)^{1/q}. An infinite exponent gives the max of |f|
/// over region nodes.
double lebesgue_norm(const NodalField& f, double exponent, const SubRegion& region);

struct CutoffSpec {
  Point center{};
  double inner = 0.0;  ///< eta == 1 on B_inner
  double outer = 0.0;  ///< eta == 0 outside B_outer
};

/// Quintic smoothstep ramp between the two radii, with its exact gradient.
struct Cutoff {
  CutoffSpec spec;
  NodalField eta;
  std::vector<NodalField> grad;
  double max_grad = 0.0;  ///< realized max |grad eta| over nodes
  double constant = 0.0;  ///< max_grad * (outer - inner)
};

Cutoff make_cutoff(const CutoffSpec& spec, const Grid& grid);

void write_field_csv(const NodalField& f, std::ostream& os);
NodalField read_field_csv(const Grid& grid, std::istream& is);
/// Little-endian dump: u32 N, u64 node count per axis, f64 (lo, hi) per axis,
/// then one f64 per node.
void write_field_binary(const NodalField& f, std::ostream& os);
NodalField read_field_binary(std::istream& is);

}  // namespace orthlip
