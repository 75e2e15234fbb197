#include "orthlip/model.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "edge_ops.hpp"
#include "orthlip/error.hpp"

namespace orthlip {

ModelParams::ModelParams(ExponentVector p_, double eps_, double eps0_)
    : p(std::move(p_)), eps(eps_), eps0(eps0_) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw InvalidArgument("eps0 must lie in (0, 1)");
  if (!(eps >= 0.0 && eps <= eps0)) {
    throw InvalidArgument("eps = " + std::to_string(eps) + " must lie in [0, eps0]");
  }
}

AxisIntegrand::AxisIntegrand(double p, double eps) : p_(p), eps_(eps), int_exp_(-1) {
  const double e = p - 2.0;
  if (e == std::floor(e) && e >= 0.0 && e <= 8.0 && e != 5.0 && e != 7.0) int_exp_ = static_cast<int>(e);
}

namespace {

AxisIntegrand axis_law(std::size_t i, const ModelParams& params) {
  if (i >= params.p.dim()) throw InvalidArgument("axis index out of range");
  return AxisIntegrand(params.p[i], params.eps);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt(v[k]);
  return s;
}

std::vector<double> split_reals(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("boundary data key '" + key + "' has non-numeric entry '" + item + "'");
    }
  }
  return out;
}

const std::string& need(const std::map<std::string, std::string>& keys, const std::string& k) {
  const auto it = keys.find(k);
  if (it == keys.end()) throw InvalidArgument("boundary data misses key '" + k + "'");
  return it->second;
}

double need_real(const std::map<std::string, std::string>& keys, const std::string& k) {
  const auto v = split_reals(need(keys, k), k);
  if (v.size() != 1) throw InvalidArgument("boundary data key '" + k + "' must be a single number");
  return v[0];
}

// Portable uniform in [0, 1); std::uniform_real_distribution is not
// reproducible across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Multilinear interpolation on a lattice, clamped outside it.
double interpolate(const Grid& g, const std::vector<double>& v, const Point& x) {
  std::array<std::size_t, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (std::size_t d = 0; d < g.dim(); ++d) {
    const double t = (std::clamp(x[d], g.extent(d).lo, g.extent(d).hi) - g.extent(d).lo) / g.h(d);
    auto cell = static_cast<std::size_t>(std::floor(t));
    cell = std::min(cell, g.nodes(d) - 2);
    base[d] = cell;
    frac[d] = std::clamp(t - static_cast<double>(cell), 0.0, 1.0);
  }
  const std::size_t corners = std::size_t{1} << g.dim();
  const std::size_t b = g.flat_index(base);
  double s = 0.0;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t off = 0;
    for (std::size_t d = 0; d < g.dim(); ++d) {
      const bool up = (c >> d) & 1U;
      w *= up ? frac[d] : 1.0 - frac[d];
      if (up) off += g.stride(d);
    }
    if (w != 0.0) s += w * v[b + off];
  }
  return s;
}

}  // namespace

double g_eval(std::size_t i, double t, const ModelParams& params) { return axis_law(i, params).value(t); }
double g_first(std::size_t i, double t, const ModelParams& params) { return axis_law(i, params).first(t); }
double g_second(std::size_t i, double t, const ModelParams& params) {
  return axis_law(i, params).second(t);
}

static void check_pairing(const NodalField& u, const ModelParams& params) {
  if (u.grid().dim() != params.p.dim()) {
    throw InvalidArgument("field dimension does not match the number of exponents");
  }
}

double energy(const NodalField& u, const ModelParams& params) {
  check_pairing(u, params);
  const detail::EdgeLoop loop(u.grid());
  double total = 0.0;
  for (std::size_t i = 0; i < loop.dim(); ++i) {
    const AxisIntegrand g(params.p[i], params.eps);
    const double ih = loop.inv_h(i);
    double axis_sum = 0.0;
    loop.for_axis(i, [&](std::size_t a, std::size_t b, double w) { axis_sum += w * g.value((u[b] - u[a]) * ih); });
    total += axis_sum;
  }
  return total;
}

double energy(const NodalField& u, const ModelParams& params, const SubRegion& region) {
  check_pairing(u, params);
  const Grid& g = u.grid();
  if (region.clearance(g) < -1e-12) throw InvalidArgument("energy region is not contained in the grid");
  const std::size_t dim = g.dim();
  std::array<std::size_t, 3> cells{1, 1, 1};
  for (std::size_t d = 0; d < dim; ++d) cells[d] = g.nodes(d) - 1;
  std::vector<AxisIntegrand> laws;
  for (std::size_t i = 0; i < dim; ++i) laws.emplace_back(params.p[i], params.eps);
  const std::size_t corners = std::size_t{1} << dim;
  const double share = g.cell_volume() / static_cast<double>(corners / 2);

  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t c2 = 0; c2 < cells[2]; ++c2) {
    for (std::size_t c1 = 0; c1 < cells[1]; ++c1) {
      for (std::size_t c0 = 0; c0 < cells[0]; ++c0) {
        const std::size_t base = g.flat_index({c0, c1, c2});
        const Point lo = g.coord(base);
        Point center{0.0, 0.0, 0.0};
        for (std::size_t d = 0; d < dim; ++d) center[d] = lo[d] + 0.5 * g.h(d);
        if (!region.contains(center, dim)) continue;
        ++count;
        for (std::size_t i = 0; i < dim; ++i) {
          const double ih = 1.0 / g.h(i);
          for (std::size_t c = 0; c < corners; ++c) {
            if ((c >> i) & 1U) continue;
            std::size_t off = 0;
            for (std::size_t d = 0; d < dim; ++d) {
              if ((c >> d) & 1U) off += g.stride(d);
            }
            const std::size_t a = base + off;
            total += share * laws[i].value((u[a + g.stride(i)] - u[a]) * ih);
          }
        }
      }
    }
  }
  if (count == 0) throw InvalidArgument("energy region contains no grid cell");
  return total;
}

NodalField el_residual(const NodalField& u, const ModelParams& params) {
  check_pairing(u, params);
  const Grid& g = u.grid();
  const detail::EdgeLoop loop(g);
  NodalField r(g, 0.0);
  for (std::size_t i = 0; i < loop.dim(); ++i) {
    const AxisIntegrand law(params.p[i], params.eps);
    const double ih = loop.inv_h(i);
    loop.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
      const double flux = w * ih * law.first((u[b] - u[a]) * ih);
      r[a] -= flux;
      r[b] += flux;
    });
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) r[k] = 0.0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Boundary data

BoundaryData BoundaryData::affine(std::vector<double> slope, double offset) {
  if (slope.size() < 2 || slope.size() > 3) throw InvalidArgument("affine slope needs 2 or 3 entries");
  for (double s : slope) {
    if (!std::isfinite(s)) throw InvalidArgument("affine slope must be finite");
  }
  if (!std::isfinite(offset)) throw InvalidArgument("affine offset must be finite");
  BoundaryData d;
  d.kind_ = Kind::Affine;
  d.dim_ = slope.size();
  d.slope_ = std::move(slope);
  d.offset_ = offset;
  return d;
}

BoundaryData BoundaryData::trigonometric(std::size_t dim, std::vector<Mode> modes, double offset) {
  if (dim < 2 || dim > 3) throw InvalidArgument("boundary data supports 2 or 3 dimensions");
  for (const auto& m : modes) {
    if (m.wave.size() != dim) throw InvalidArgument("mode wave vector has the wrong dimension");
    bool finite = std::isfinite(m.amplitude) && std::isfinite(m.phase);
    for (double w : m.wave) finite = finite && std::isfinite(w);
    if (!finite) throw InvalidArgument("trigonometric mode coefficients must be finite");
  }
  if (!std::isfinite(offset)) throw InvalidArgument("trigonometric offset must be finite");
  BoundaryData d;
  d.kind_ = Kind::Trigonometric;
  d.dim_ = dim;
  d.offset_ = offset;
  d.multiplier_.assign(modes.size(), 1.0);
  d.modes_ = std::move(modes);
  return d;
}

BoundaryData BoundaryData::random_smooth(std::size_t dim, std::uint64_t seed, int modes, int max_frequency,
                                         double amplitude) {
  if (modes < 1) throw InvalidArgument("random-smooth data needs at least one mode");
  if (max_frequency < 1) throw InvalidArgument("random-smooth max_frequency must be >= 1");
  if (!(amplitude > 0.0 && std::isfinite(amplitude))) {
    throw InvalidArgument("random-smooth amplitude must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<Mode> list;
  const int span = 2 * max_frequency + 1;
  for (int m = 0; m < modes; ++m) {
    Mode mode;
    double k2 = 0.0;
    do {
      mode.wave.assign(dim, 0.0);
      k2 = 0.0;
      for (auto& w : mode.wave) {
        const int k = static_cast<int>(unit_uniform(rng) * span) - max_frequency;
        w = std::numbers::pi * k;
        k2 += static_cast<double>(k) * k;
      }
    } while (k2 == 0.0);
    mode.amplitude = amplitude * (2.0 * unit_uniform(rng) - 1.0) / std::sqrt(1.0 + k2);
    mode.phase = 2.0 * std::numbers::pi * unit_uniform(rng);
    list.push_back(std::move(mode));
  }
  BoundaryData d = trigonometric(dim, std::move(list), 0.0);
  d.kind_ = Kind::RandomSmooth;
  d.seed_ = seed;
  d.random_modes_ = modes;
  d.max_frequency_ = max_frequency;
  d.random_amplitude_ = amplitude;
  return d;
}

BoundaryData BoundaryData::tabulated(Grid sampling, std::vector<double> values) {
  NodalField checked(sampling, std::move(values));  // validates size
  for (double v : checked.values()) {
    if (!std::isfinite(v)) throw InvalidArgument("tabulated boundary values must be finite");
  }
  BoundaryData d;
  d.kind_ = Kind::Tabulated;
  d.dim_ = sampling.dim();
  d.samples_ = checked.values();
  d.sampling_ = std::make_shared<const Grid>(std::move(sampling));
  return d;
}

std::string BoundaryData::kind_name() const {
  switch (kind_) {
    case Kind::Affine: return "affine";
    case Kind::Trigonometric: return "trigonometric";
    case Kind::RandomSmooth: return "random-smooth";
    case Kind::Tabulated: return "tabulated";
  }
  return "unknown";
}

double BoundaryData::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::Affine: {
      double s = offset_;
      for (std::size_t d = 0; d < dim_; ++d) s += slope_[d] * x[d];
      return s;
    }
    case Kind::Trigonometric:
    case Kind::RandomSmooth: {
      double s = offset_;
      for (std::size_t m = 0; m < modes_.size(); ++m) {
        double arg = modes_[m].phase;
        for (std::size_t d = 0; d < dim_; ++d) arg += modes_[m].wave[d] * x[d];
        s += multiplier_[m] * modes_[m].amplitude * std::sin(arg);
      }
      return s;
    }
    case Kind::Tabulated: return interpolate(*sampling_, samples_, x);
  }
  return 0.0;
}

double BoundaryData::linf_bound(const Grid& domain) const {
  if (domain.dim() != dim_) throw InvalidArgument("boundary data and grid differ in dimension");
  switch (kind_) {
    case Kind::Affine: {
      // |a.x + b| is convex, so its max over the box sits at a corner.
      double m = 0.0;
      for (std::size_t c = 0; c < (std::size_t{1} << dim_); ++c) {
        double s = offset_;
        for (std::size_t d = 0; d < dim_; ++d) {
          s += slope_[d] * (((c >> d) & 1U) ? domain.extent(d).hi : domain.extent(d).lo);
        }
        m = std::max(m, std::abs(s));
      }
      return m;
    }
    case Kind::Trigonometric:
    case Kind::RandomSmooth: {
      double m = std::abs(offset_);
      for (std::size_t k = 0; k < modes_.size(); ++k) m += std::abs(multiplier_[k] * modes_[k].amplitude);
      return m;
    }
    case Kind::Tabulated: {
      double m = 0.0;
      for (double v : samples_) m = std::max(m, std::abs(v));
      return m;
    }
  }
  return 0.0;
}

NodalField BoundaryData::tabulated_field() const {
  if (kind_ != Kind::Tabulated) throw InvalidArgument("boundary data is not tabulated");
  return NodalField(*sampling_, samples_);
}

std::map<std::string, std::string> BoundaryData::to_keys(const std::string& values_path) const {
  std::map<std::string, std::string> k;
  k["kind"] = kind_name();
  k["dim"] = std::to_string(dim_);
  switch (kind_) {
    case Kind::Affine:
      k["slope"] = join(slope_);
      k["offset"] = fmt(offset_);
      break;
    case Kind::Trigonometric:
      k["offset"] = fmt(offset_);
      k["modes"] = std::to_string(modes_.size());
      for (std::size_t m = 0; m < modes_.size(); ++m) {
        std::vector<double> row{modes_[m].amplitude, modes_[m].phase};
        row.insert(row.end(), modes_[m].wave.begin(), modes_[m].wave.end());
        k["mode." + std::to_string(m)] = join(row);
      }
      break;
    case Kind::RandomSmooth:
      k["seed"] = std::to_string(seed_);
      k["modes"] = std::to_string(random_modes_);
      k["max_frequency"] = std::to_string(max_frequency_);
      k["amplitude"] = fmt(random_amplitude_);
      break;
    case Kind::Tabulated: {
      std::vector<double> nodes, extent;
      for (std::size_t d = 0; d < dim_; ++d) {
        nodes.push_back(static_cast<double>(sampling_->nodes(d)));
        extent.push_back(sampling_->extent(d).lo);
        extent.push_back(sampling_->extent(d).hi);
      }
      k["nodes"] = join(nodes);
      k["extent"] = join(extent);
      k["values"] = values_path;
      break;
    }
  }
  if (mollified_ > 0.0) k["mollifier"] = fmt(mollified_);
  return k;
}

BoundaryData BoundaryData::from_keys(const std::map<std::string, std::string>& keys, const std::string& base_dir) {
  const std::string& kind = need(keys, "kind");
  const double dim_real = need_real(keys, "dim");
  if (dim_real != 2.0 && dim_real != 3.0) throw InvalidArgument("boundary data 'dim' must be 2 or 3");
  const auto dim = static_cast<std::size_t>(dim_real);
  auto whole = [&](const std::string& key) {
    const double v = need_real(keys, key);
    if (v != std::floor(v) || v < 0.0) throw InvalidArgument("boundary data key '" + key + "' must be a count");
    return v;
  };

  BoundaryData d;
  if (kind == "affine") {
    auto slope = split_reals(need(keys, "slope"), "slope");
    if (slope.size() != dim) throw InvalidArgument("affine slope must have 'dim' entries");
    d = affine(std::move(slope), need_real(keys, "offset"));
  } else if (kind == "trigonometric") {
    const auto count = static_cast<std::size_t>(whole("modes"));
    std::vector<Mode> modes;
    for (std::size_t m = 0; m < count; ++m) {
      const std::string key = "mode." + std::to_string(m);
      const auto row = split_reals(need(keys, key), key);
      if (row.size() != dim + 2) throw InvalidArgument("'" + key + "' must list amplitude, phase and the wave vector");
      modes.push_back(Mode{{row.begin() + 2, row.end()}, row[0], row[1]});
    }
    d = trigonometric(dim, std::move(modes), need_real(keys, "offset"));
  } else if (kind == "random-smooth") {
    const auto seed = static_cast<std::uint64_t>(whole("seed"));
    const int modes = keys.count("modes") ? static_cast<int>(whole("modes")) : 6;
    const int maxf = keys.count("max_frequency") ? static_cast<int>(whole("max_frequency")) : 3;
    const double amp = keys.count("amplitude") ? need_real(keys, "amplitude") : 1.0;
    d = random_smooth(dim, seed, modes, maxf, amp);
  } else if (kind == "tabulated") {
    const auto nodes = split_reals(need(keys, "nodes"), "nodes");
    const auto ext = split_reals(need(keys, "extent"), "extent");
    if (nodes.size() != dim || ext.size() != 2 * dim) {
      throw InvalidArgument("tabulated data needs 'dim' node counts and 2*'dim' extent bounds");
    }
    std::vector<Interval> box;
    std::vector<std::size_t> counts;
    for (std::size_t a = 0; a < dim; ++a) {
      box.push_back({ext[2 * a], ext[2 * a + 1]});
      counts.push_back(static_cast<std::size_t>(nodes[a]));
    }
    Grid lattice(box, counts);
    std::string path = need(keys, "values");
    if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open tabulated values '" + path + "'");
    NodalField f = read_field_csv(lattice, in);
    d = tabulated(lattice, f.values());
  } else {
    throw InvalidArgument("unknown boundary data kind '" + kind + "'");
  }
  if (keys.count("mollifier")) d = mollify(d, need_real(keys, "mollifier"));
  return d;
}

// ---------------------------------------------------------------------------
// Mollification

double mollifier_profile(double r) noexcept {
  if (r >= 1.0) return 0.0;
  const double s = 1.0 - r * r;
  return s * s;
}

double mollifier_fourier(std::size_t dim, double k) {
  if (dim != 2 && dim != 3) throw InvalidArgument("mollifier supports 2 or 3 dimensions");
  k = std::abs(k);
  if (k == 0.0) return 1.0;
  using boost::math::quadrature::gauss_kronrod;
  // Radial integrals of the profile against the Fourier kernel of the sphere.
  const auto radial = [&](double r) {
    const double w = mollifier_profile(r);
    if (dim == 2) return w * std::cyl_bessel_j(0.0, k * r) * r;
    const double kr = k * r;
    return w * (kr == 0.0 ? 1.0 : std::sin(kr) / kr) * r * r;
  };
  const double mass = dim == 2 ? 1.0 / 6.0 : 8.0 / 105.0;
  // Split [0,1] so each panel sees at most a few oscillations.
  const int panels = 1 + static_cast<int>(k / 4.0);
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    total += gauss_kronrod<double, 31>::integrate(radial, static_cast<double>(p) / panels,
                                                  static_cast<double>(p + 1) / panels, 8, 1e-14);
  }
  return total / mass;
}

BoundaryData mollify(const BoundaryData& data, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("mollifier radius must be positive");
  using Kind = BoundaryData::Kind;
  if (data.kind() == Kind::Affine) return data;
  if (data.mollifier_radius() > 0.0) throw InvalidArgument("boundary data is already mollified");

  BoundaryData out = data;
  out.mollified_ = eps;
  if (data.kind() == Kind::Trigonometric || data.kind() == Kind::RandomSmooth) {
    for (std::size_t m = 0; m < out.modes_.size(); ++m) {
      double k2 = 0.0;
      for (double w : out.modes_[m].wave) k2 += w * w;
      out.multiplier_[m] = mollifier_fourier(data.dim(), std::sqrt(k2) * eps);
    }
    return out;
  }

  const Grid& lat = *data.sampling();
  if (lat.max_h() > eps) {
    throw InvalidArgument("tabulated data sampled at spacing " + std::to_string(lat.max_h()) +
                          " is coarser than the mollifier radius " + std::to_string(eps));
  }
  // Composite 4-point Gauss-Legendre rule on [-1,1]^N, panels no wider than
  // the sampling so that the interpolant's kinks stay resolved.
  static constexpr double xg[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                   0.8611363115940526};
  static constexpr double wg[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                   0.3478548451374538};
  const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * eps / lat.max_h())));
  std::vector<double> x1, w1;
  for (int p = 0; p < panels; ++p) {
    const double a = -1.0 + 2.0 * p / panels, half = 1.0 / panels;
    for (int q = 0; q < 4; ++q) {
      x1.push_back(a + half * (xg[q] + 1.0));
      w1.push_back(half * wg[q]);
    }
  }
  const std::size_t dim = data.dim();
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
  const std::size_t m = x1.size();
  const std::size_t m2 = dim == 3 ? m : 1;
  for (std::size_t c = 0; c < m2; ++c) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t a = 0; a < m; ++a) {
        const double z = dim == 3 ? x1[c] : 0.0;
        const double r = std::sqrt(x1[a] * x1[a] + x1[b] * x1[b] + z * z);
        const double w = w1[a] * w1[b] * (dim == 3 ? w1[c] : 1.0) * mollifier_profile(r);
        if (w <= 0.0) continue;
        nodes.push_back({eps * x1[a], eps * x1[b], eps * z});
        weights.push_back(w);
      }
    }
  }
  double mass = 0.0;
  for (double w : weights) mass += w;
  for (double& w : weights) w /= mass;

  std::vector<double> smoothed(lat.size());
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const Point x = lat.coord(k);
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      Point y{x[0] - nodes[q][0], x[1] - nodes[q][1], x[2] - nodes[q][2]};
      s += weights[q] * interpolate(lat, data.samples(), y);
    }
    smoothed[k] = s;
  }
  out.samples_ = std::move(smoothed);
  return out;
}

NodalField sample(const BoundaryData& data, const Grid& grid) {
  if (data.dim() != grid.dim()) throw InvalidArgument("boundary data and grid differ in dimension");
  return NodalField::sample(grid, [&](const Point& x) { return data(x); });
}

}  // namespace orthlip
