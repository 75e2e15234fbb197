#include "orthlip/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orthlip/error.hpp"

namespace orthlip {

Grid::Grid(std::vector<Interval> extent, std::vector<std::size_t> nodes) : dim_(extent.size()) {
  if (dim_ < 2 || dim_ > 3) throw InvalidArgument("grids support 2 or 3 dimensions");
  if (nodes.size() != dim_) throw InvalidArgument("one node count per axis is required");
  std::size_t stride = 1;
  cell_volume_ = 1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    if (!(extent[d].hi > extent[d].lo)) throw InvalidArgument("each axis interval must have lo < hi");
    if (nodes[d] < 3) throw InvalidArgument("each axis needs at least 3 nodes");
    extent_[d] = extent[d];
    n_[d] = nodes[d];
    h_[d] = extent[d].length() / static_cast<double>(nodes[d] - 1);
    stride_[d] = stride;
    stride *= nodes[d];
    cell_volume_ *= h_[d];
  }
  size_ = stride;
}

Grid Grid::unit(std::size_t dim, std::size_t nodes_per_axis) {
  return Grid(std::vector<Interval>(dim, Interval{0.0, 1.0}),
              std::vector<std::size_t>(dim, nodes_per_axis));
}

double Grid::max_h() const noexcept {
  double m = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) m = std::max(m, h_[d]);
  return m;
}

double Grid::domain_volume() const noexcept {
  double v = 1.0;
  for (std::size_t d = 0; d < dim_; ++d) v *= extent_[d].length();
  return v;
}

std::array<std::size_t, 3> Grid::multi_index(std::size_t flat) const noexcept {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (std::size_t d = 0; d < dim_; ++d) {
    idx[d] = flat % n_[d];
    flat /= n_[d];
  }
  return idx;
}

std::size_t Grid::flat_index(const std::array<std::size_t, 3>& idx) const noexcept {
  std::size_t f = 0;
  for (std::size_t d = 0; d < dim_; ++d) f += idx[d] * stride_[d];
  return f;
}

Point Grid::coord(std::size_t flat) const noexcept {
  const auto idx = multi_index(flat);
  Point x{0.0, 0.0, 0.0};
  for (std::size_t d = 0; d < dim_; ++d) {
    x[d] = idx[d] + 1 == n_[d] ? extent_[d].hi : extent_[d].lo + static_cast<double>(idx[d]) * h_[d];
  }
  return x;
}

bool Grid::on_face(std::size_t flat, std::size_t axis) const noexcept {
  const std::size_t i = (flat / stride_[axis]) % n_[axis];
  return i == 0 || i + 1 == n_[axis];
}

bool Grid::is_boundary(std::size_t flat) const noexcept {
  for (std::size_t d = 0; d < dim_; ++d) {
    if (on_face(flat, d)) return true;
  }
  return false;
}

double Grid::distance_to_boundary(const Point& x) const noexcept {
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < dim_; ++d) {
    dist = std::min({dist, x[d] - extent_[d].lo, extent_[d].hi - x[d]});
  }
  return dist;
}

NodalField::NodalField(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

NodalField::NodalField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidArgument("field size does not match its grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("field values must be finite");
  }
}

NodalField NodalField::sample(const Grid& grid, const std::function<double(const Point&)>& f) {
  NodalField out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) out.values_[k] = f(grid.coord(k));
  return out;
}

double NodalField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double NodalField::max_abs_boundary() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (grid_.is_boundary(k)) m = std::max(m, std::abs(values_[k]));
  }
  return m;
}

double NodalField::max_abs_interior() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!grid_.is_boundary(k)) m = std::max(m, std::abs(values_[k]));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Regions

SubRegion SubRegion::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  SubRegion r;
  r.kind_ = Kind::Ball;
  r.center_ = center;
  r.outer_ = radius;
  return r;
}

SubRegion SubRegion::annulus(const Point& center, double inner, double outer) {
  if (!(inner >= 0.0 && inner < outer)) throw InvalidArgument("annulus needs 0 <= inner < outer");
  SubRegion r;
  r.kind_ = Kind::Annulus;
  r.center_ = center;
  r.inner_ = inner;
  r.outer_ = outer;
  return r;
}

SubRegion SubRegion::box(const Point& lo, const Point& hi) {
  SubRegion r;
  r.kind_ = Kind::Box;
  r.lo_ = lo;
  r.hi_ = hi;
  for (std::size_t d = 0; d < 3; ++d) r.center_[d] = 0.5 * (lo[d] + hi[d]);
  return r;
}

SubRegion SubRegion::domain(const Grid& g) {
  Point lo{0.0, 0.0, 0.0}, hi{0.0, 0.0, 0.0};
  for (std::size_t d = 0; d < g.dim(); ++d) {
    lo[d] = g.extent(d).lo;
    hi[d] = g.extent(d).hi;
  }
  return box(lo, hi);
}

bool SubRegion::contains(const Point& x, std::size_t dim) const noexcept {
  if (kind_ == Kind::Box) {
    for (std::size_t d = 0; d < dim; ++d) {
      if (x[d] < lo_[d] || x[d] > hi_[d]) return false;
    }
    return true;
  }
  double r2 = 0.0;
  for (std::size_t d = 0; d < dim; ++d) r2 += (x[d] - center_[d]) * (x[d] - center_[d]);
  const double r = std::sqrt(r2);
  return r <= outer_ && (kind_ == Kind::Ball || r >= inner_);
}

double SubRegion::clearance(const Grid& g) const noexcept {
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < g.dim(); ++d) {
    const Interval& e = g.extent(d);
    if (kind_ == Kind::Box) {
      c = std::min({c, lo_[d] - e.lo, e.hi - hi_[d]});
    } else {
      c = std::min({c, center_[d] - outer_ - e.lo, e.hi - center_[d] - outer_});
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Differences

NodalField discrete_gradient(const NodalField& u, std::size_t axis) {
  const Grid& g = u.grid();
  if (axis >= g.dim()) throw InvalidArgument("gradient axis out of range");
  NodalField out(g);
  const std::size_t s = g.stride(axis);
  const std::size_t n = g.nodes(axis);
  const double h = g.h(axis);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::size_t i = (k / s) % n;
    if (i == 0) {
      out[k] = (u[k + s] - u[k]) / h;
    } else if (i + 1 == n) {
      out[k] = (u[k] - u[k - s]) / h;
    } else {
      out[k] = (u[k + s] - u[k - s]) / (2.0 * h);
    }
  }
  return out;
}

NodalField discrete_second_derivative(const NodalField& u, std::size_t i, std::size_t j) {
  const Grid& g = u.grid();
  if (i >= g.dim() || j >= g.dim()) throw InvalidArgument("derivative axis out of range");
  NodalField out(g);
  if (i == j) {
    const std::size_t s = g.stride(i);
    const double h2 = g.h(i) * g.h(i);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!g.is_boundary(k)) out[k] = (u[k + s] - 2.0 * u[k] + u[k - s]) / h2;
    }
    return out;
  }
  const std::size_t si = g.stride(i), sj = g.stride(j);
  const double denom = 4.0 * g.h(i) * g.h(j);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    out[k] = (u[k + si + sj] - u[k + si - sj] - u[k - si + sj] + u[k - si - sj]) / denom;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

// Calls fn(corner_mean) for every cell whose center lies in the region.
template <class Fn>
std::size_t for_each_cell(const NodalField& f, const SubRegion& region, Fn&& fn) {
  const Grid& g = f.grid();
  const std::size_t dim = g.dim();
  const std::size_t corners = std::size_t{1} << dim;
  std::array<std::size_t, 8> offset{};
  for (std::size_t c = 0; c < corners; ++c) {
    std::size_t o = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      if (c & (std::size_t{1} << d)) o += g.stride(d);
    }
    offset[c] = o;
  }
  const std::size_t n0 = g.nodes(0) - 1, n1 = g.nodes(1) - 1, n2 = dim == 3 ? g.nodes(2) - 1 : 1;
  std::size_t count = 0;
  const double inv = 1.0 / static_cast<double>(corners);
  for (std::size_t c2 = 0; c2 < n2; ++c2) {
    for (std::size_t c1 = 0; c1 < n1; ++c1) {
      for (std::size_t c0 = 0; c0 < n0; ++c0) {
        Point center{g.extent(0).lo + (static_cast<double>(c0) + 0.5) * g.h(0),
                     g.extent(1).lo + (static_cast<double>(c1) + 0.5) * g.h(1), 0.0};
        if (dim == 3) center[2] = g.extent(2).lo + (static_cast<double>(c2) + 0.5) * g.h(2);
        if (!region.contains(center, dim)) continue;
        const std::size_t base = g.flat_index({c0, c1, c2});
        double sum = 0.0;
        for (std::size_t c = 0; c < corners; ++c) sum += f[base + offset[c]];
        fn(sum * inv);
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

double integrate(const NodalField& f, const SubRegion& region) {
  double total = 0.0;
  const std::size_t cells = for_each_cell(f, region, [&](double v) { total += v; });
  if (cells == 0) throw InvalidArgument("integration region contains no grid cell");
  return total * f.grid().cell_volume();
}

double region_volume(const Grid& g, const SubRegion& region) {
  const NodalField one(g, 1.0);
  return integrate(one, region);
}

double lebesgue_norm(const NodalField& f, double exponent, const SubRegion& region) {
  if (std::isinf(exponent) && exponent > 0) {
    const Grid& g = f.grid();
    double m = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (region.contains(g.coord(k), g.dim())) {
        m = std::max(m, std::abs(f[k]));
        any = true;
      }
    }
    if (!any) throw InvalidArgument("norm region contains no grid node");
    return m;
  }
  if (!(exponent >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
  double total = 0.0;
  const std::size_t cells =
      for_each_cell(f, region, [&](double v) { total += std::pow(std::abs(v), exponent); });
  if (cells == 0) throw InvalidArgument("norm region contains no grid cell");
  return std::pow(total * f.grid().cell_volume(), 1.0 / exponent);
}

// ---------------------------------------------------------------------------
// Cutoff

Cutoff make_cutoff(const CutoffSpec& spec, const Grid& grid) {
  if (!(spec.inner >= 0.0 && spec.inner < spec.outer)) {
    throw InvalidArgument("cutoff radii must satisfy 0 <= inner < outer");
  }
  const double width = spec.outer - spec.inner;
  if (width < 2.0 * grid.max_h()) {
    std::ostringstream os;
    os << "cutoff ramp width " << width << " is below two grid spacings (" << 2.0 * grid.max_h()
       << ")";
    throw InvalidArgument(os.str());
  }
  if (grid.distance_to_boundary(spec.center) < spec.outer) {
    throw InvalidArgument("cutoff support B_outer leaves the domain");
  }
  Cutoff c{spec, NodalField(grid), {}, 0.0, 0.0};
  for (std::size_t d = 0; d < grid.dim(); ++d) c.grad.emplace_back(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point x = grid.coord(k);
    double r2 = 0.0;
    for (std::size_t d = 0; d < grid.dim(); ++d) r2 += (x[d] - spec.center[d]) * (x[d] - spec.center[d]);
    const double r = std::sqrt(r2);
    const double z = std::clamp((spec.outer - r) / width, 0.0, 1.0);
    c.eta[k] = z * z * z * (10.0 + z * (-15.0 + 6.0 * z));
    const double slope = 30.0 * z * z * (1.0 - z) * (1.0 - z) / width;
    if (slope > 0.0 && r > 0.0) {
      for (std::size_t d = 0; d < grid.dim(); ++d) c.grad[d][k] = -slope * (x[d] - spec.center[d]) / r;
      c.max_grad = std::max(c.max_grad, slope);
    }
  }
  c.constant = c.max_grad * width;
  return c;
}

}  // namespace orthlip
