#include "orthlip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <quadmath.h>

#include "edge_ops.hpp"
#include "fast_poisson.hpp"
#include "orthlip/error.hpp"

namespace orthlip {

namespace {

using Vec = std::vector<double>;

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Discrete energy and its derivatives along lines, specialized for the solver.
class Problem {
 public:
  Problem(const Grid& g, const ModelParams& params) : loop_(g), vol_(g.cell_volume()), eps_(params.eps) {
    for (std::size_t i = 0; i < g.dim(); ++i) laws_.emplace_back(params.p[i], params.eps);
  }

  double energy(const Vec& u) const {
    Neumaier total;
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const AxisIntegrand& law = laws_[i];
      const double ih = loop_.inv_h(i);
      Neumaier axis;
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) { axis.add(w * law.value((u[b] - u[a]) * ih)); });
      total.add(axis.value());
    }
    return total.value();
  }

  /// Energy in quadruple precision. Descent decisions compare these values:
  /// in double, differences below one ulp of E are rounding noise.
  __float128 energy_exact(const Vec& u) const {
    __float128 total = 0;
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const double p = laws_[i].p();
      const __float128 ih = __float128(1) / __float128(1.0 / loop_.inv_h(i));
      const __float128 inv_p = __float128(1) / __float128(p), half_eps = __float128(eps_) / 2;
      const int k = static_cast<int>(p - 2.0);
      const bool integral = p - 2.0 == static_cast<double>(k) && k <= 16;
      __float128 axis = 0;
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
        const __float128 t = (__float128(u[b]) - __float128(u[a])) * ih;
        const __float128 t2 = t * t;
        __float128 wt = 1;
        if (integral) {
          const __float128 at = t < 0 ? -t : t;
          for (int m = 0; m < k; ++m) wt *= at;
        } else {
          wt = powq(t < 0 ? -t : t, __float128(p - 2.0));
        }
        axis += __float128(w) * (wt * inv_p + half_eps) * t2;
      });
      total += axis;
    }
    return total;
  }

  /// Weak-form gradient; the caller zeroes boundary entries.
  void gradient(const Vec& u, Vec& grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const AxisIntegrand& law = laws_[i];
      const double ih = loop_.inv_h(i);
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
        const double flux = w * ih * law.first((u[b] - u[a]) * ih);
        grad[a] -= flux;
        grad[b] += flux;
      });
    }
  }

  /// phi'(alpha) and phi''(alpha) for phi(alpha) = E(u + alpha d).
  std::pair<double, double> line_derivatives(const Vec& u, const Vec& d, double alpha) const {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const AxisIntegrand& law = laws_[i];
      const double ih = loop_.inv_h(i);
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
        const double dd = (d[b] - d[a]) * ih;
        if (dd == 0.0) return;
        const double t = (u[b] - u[a]) * ih + alpha * dd;
        s += w * law.first(t) * dd;
        c += w * law.second(t) * dd * dd;
      });
    }
    return {s, c};
  }

  /// E(u + alpha d) - E(u), summed edge by edge to avoid cancellation.
  double energy_change(const Vec& u, const Vec& d, double alpha) const {
    Neumaier total;
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const AxisIntegrand& law = laws_[i];
      const double ih = loop_.inv_h(i);
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
        const double dd = (d[b] - d[a]) * ih;
        if (dd == 0.0) return;
        const double t = (u[b] - u[a]) * ih;
        total.add(w * (law.value(t + alpha * dd) - law.value(t)));
      });
    }
    return total.value();
  }

  /// Weak-form Hessian diagonal and per-axis mean of g'' over edges.
  void curvature(const Vec& u, Vec& diag, std::array<double, 3>& mean) const {
    std::fill(diag.begin(), diag.end(), 0.0);
    mean = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const AxisIntegrand& law = laws_[i];
      const double ih = loop_.inv_h(i);
      double sum = 0.0, weight = 0.0;
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
        const double g2 = law.second((u[b] - u[a]) * ih);
        const double h = w * g2 * ih * ih;
        diag[a] += h;
        diag[b] += h;
        sum += w * g2;
        weight += w;
      });
      mean[i] = sum / weight;
    }
  }

  /// fn(a, b, c) with the Hessian coupling c = w g'' / h^2 of every edge.
  template <class Fn>
  void edge_curvature(const Vec& u, Fn&& fn) const {
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      const AxisIntegrand& law = laws_[i];
      const double ih = loop_.inv_h(i);
      loop_.for_axis(i, [&](std::size_t a, std::size_t b, double w) {
        fn(a, b, w * law.second((u[b] - u[a]) * ih) * ih * ih);
      });
    }
  }

  std::size_t dim() const { return laws_.size(); }
  double vol() const { return vol_; }

 private:
  detail::EdgeLoop loop_;
  double vol_;
  double eps_;
  std::vector<AxisIntegrand> laws_;
};

class Preconditioning {
 public:
  Preconditioning(const Grid& g, Preconditioner kind) : kind_(kind), diag_(g.size(), 0.0), scale_(g.size(), 0.0) {
    // Sparse factors fill in badly in 3D; large 3D grids solve the Hessian
    // system iteratively instead.
    std::size_t unknowns = 1;
    for (std::size_t i = 0; i < g.dim(); ++i) unknowns *= g.nodes(i) - 2;
    direct_ = g.dim() == 2 || unknowns <= 8000;
    if (kind == Preconditioner::Spectral || kind == Preconditioner::ScaledSpectral ||
        (kind == Preconditioner::Hessian && !direct_)) {
      poisson_ = std::make_unique<detail::FastPoisson>(g);
    }
  }

  void refresh(const Problem& prob, const Vec& u, const std::vector<char>& interior) {
    if (kind_ == Preconditioner::Hessian) {
      refresh_hessian(prob, u, interior);
      if (direct_) return;
    }
    std::array<double, 3> mean{};
    prob.curvature(u, diag_, mean);
    double dmax = 0.0;
    for (std::size_t k = 0; k < diag_.size(); ++k) {
      if (interior[k]) dmax = std::max(dmax, diag_[k]);
    }
    // Degenerate points (eps = 0, flat edges) have zero curvature.
    const double floor = std::max(dmax * 1e-12, std::numeric_limits<double>::min());
    for (auto& v : diag_) v = std::max(v, floor);
    if (!poisson_) return;
    double amax = 0.0;
    for (std::size_t i = 0; i < prob.dim(); ++i) amax = std::max(amax, mean[i]);
    if (!(amax > 0.0)) amax = 1.0;
    for (std::size_t i = 0; i < prob.dim(); ++i) mean[i] = std::max(mean[i], amax * 1e-12);
    poisson_->set_coefficients(mean);
    if (kind_ != Preconditioner::Spectral) {
      const double ref = prob.vol() * poisson_->diagonal();
      for (std::size_t k = 0; k < scale_.size(); ++k) scale_[k] = 1.0 / std::sqrt(diag_[k] / ref);
    }
  }

  /// z = M^{-1} grad for a weak-form gradient vanishing on the boundary.
  void apply(const Vec& grad, Vec& z, double vol) {
    switch (kind_) {
      case Preconditioner::Jacobi:
        for (std::size_t k = 0; k < grad.size(); ++k) z[k] = grad[k] / diag_[k];
        return;
      case Preconditioner::Spectral:
        for (std::size_t k = 0; k < grad.size(); ++k) z[k] = grad[k] / vol;
        poisson_->solve(z, z);
        return;
      case Preconditioner::ScaledSpectral:
        for (std::size_t k = 0; k < grad.size(); ++k) z[k] = scale_[k] * grad[k] / vol;
        poisson_->solve(z, z);
        for (std::size_t k = 0; k < grad.size(); ++k) z[k] *= scale_[k];
        return;
      case Preconditioner::Hessian: {
        Eigen::VectorXd r(static_cast<Eigen::Index>(unknowns_));
        for (std::size_t k = 0; k < grad.size(); ++k) {
          if (id_[k] >= 0) r[id_[k]] = grad[k];
        }
        const Eigen::VectorXd x = direct_ ? Eigen::VectorXd(ldlt_.solve(r)) : inner_cg(r, grad.size(), vol);
        for (std::size_t k = 0; k < grad.size(); ++k) z[k] = id_[k] >= 0 ? x[id_[k]] : 0.0;
        return;
      }
    }
  }

 private:
  using Sparse = Eigen::SparseMatrix<double>;

  void scaled_spectral(const Vec& r, Vec& z, double vol) {
    for (std::size_t k = 0; k < r.size(); ++k) z[k] = scale_[k] * r[k] / vol;
    poisson_->solve(z, z);
    for (std::size_t k = 0; k < r.size(); ++k) z[k] *= scale_[k];
  }

  // Loose PCG on the assembled Hessian, preconditioned by the scaled spectral
  // operator.
  Eigen::VectorXd inner_cg(const Eigen::VectorXd& b, std::size_t nodes, double vol) {
    Vec full(nodes, 0.0), zf(nodes, 0.0);
    auto precondition = [&](const Eigen::VectorXd& r) {
      for (std::size_t k = 0; k < nodes; ++k) full[k] = id_[k] >= 0 ? r[id_[k]] : 0.0;
      scaled_spectral(full, zf, vol);
      Eigen::VectorXd out(r.size());
      for (std::size_t k = 0; k < nodes; ++k) {
        if (id_[k] >= 0) out[id_[k]] = zf[k];
      }
      return out;
    };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = precondition(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    const double stop = 1e-4 * b.norm();
    for (int it = 0; it < 200 && r.norm() > stop; ++it) {
      const Eigen::VectorXd hp = hessian_.selfadjointView<Eigen::Lower>() * p;
      const double php = p.dot(hp);
      if (!(php > 0.0)) break;
      const double a = rz / php;
      x += a * p;
      r -= a * hp;
      z = precondition(r);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return x;
  }

  void refresh_hessian(const Problem& prob, const Vec& u, const std::vector<char>& interior) {
    if (id_.empty()) {
      id_.assign(u.size(), -1);
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (interior[k]) id_[k] = static_cast<long>(unknowns_++);
      }
    }
    double cmax = 0.0;
    prob.edge_curvature(u, [&](std::size_t, std::size_t, double c) { cmax = std::max(cmax, c); });
    // Flat edges have zero curvature when eps = 0.
    const double floor = std::max(cmax * 1e-12, std::numeric_limits<double>::min());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * unknowns_ * prob.dim());
    prob.edge_curvature(u, [&](std::size_t a, std::size_t b, double c) {
      c = std::max(c, floor);
      const long ia = id_[a], ib = id_[b];
      if (ia >= 0) trip.emplace_back(ia, ia, c);
      if (ib >= 0) trip.emplace_back(ib, ib, c);
      if (ia >= 0 && ib >= 0) {
        trip.emplace_back(ia, ib, -c);
        trip.emplace_back(ib, ia, -c);
      }
    });
    const auto n = static_cast<Eigen::Index>(unknowns_);
    Sparse h(n, n);
    h.setFromTriplets(trip.begin(), trip.end());
    if (!direct_) {
      hessian_ = h.triangularView<Eigen::Lower>();
      return;
    }
    if (!analyzed_) {
      ldlt_.analyzePattern(h);
      analyzed_ = true;
    }
    ldlt_.factorize(h);
    if (ldlt_.info() != Eigen::Success) throw RangeError("Hessian factorization failed");
  }

  Preconditioner kind_;
  Vec diag_;
  Vec scale_;
  std::unique_ptr<detail::FastPoisson> poisson_;
  std::vector<long> id_;
  std::size_t unknowns_ = 0;
  bool analyzed_ = false;
  Sparse hessian_;
  bool direct_ = true;
  Eigen::SimplicialLDLT<Sparse> ldlt_;
};

Vec interpolate_from_faces(const Grid& g, const Vec& ub) {
  Vec u = ub;
  const std::size_t dim = g.dim();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    const auto idx = g.multi_index(k);
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t n = g.nodes(i), st = g.stride(i);
      const double t = static_cast<double>(idx[i]) / static_cast<double>(n - 1);
      s += (1.0 - t) * ub[k - idx[i] * st] + t * ub[k + (n - 1 - idx[i]) * st];
    }
    u[k] = s / static_cast<double>(dim);
  }
  return u;
}

Vec harmonic_extension(const Grid& g, const Vec& ub) {
  Vec u = interpolate_from_faces(g, ub);
  // Correct by z with L z = -L u, z = 0 on the boundary.
  Vec rhs(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    double lap = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i) {
      const std::size_t s = g.stride(i);
      lap += (2.0 * u[k] - u[k - s] - u[k + s]) / (g.h(i) * g.h(i));
    }
    rhs[k] = -lap;
  }
  detail::FastPoisson fp(g);
  fp.solve(rhs, rhs);
  for (std::size_t k = 0; k < g.size(); ++k) u[k] += rhs[k];
  return u;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("solver tol must be positive");
  if (max_iters < 0) throw InvalidArgument("solver max_iters must be >= 0");
  if (!(linesearch.shrink > 0.0 && linesearch.shrink < 1.0)) {
    throw InvalidArgument("line-search shrink factor must lie in (0, 1)");
  }
  if (!(linesearch.sufficient_decrease > 0.0 && linesearch.sufficient_decrease <= 0.5)) {
    throw InvalidArgument("sufficient-decrease constant must lie in (0, 1/2]");
  }
  if (linesearch.max_backtracks < 1) throw InvalidArgument("max_backtracks must be >= 1");
  if (refresh < 1) throw InvalidArgument("preconditioner refresh interval must be >= 1");
  if (initial == InitialGuess::Given && !given) throw InvalidArgument("initial guess 'given' needs a field");
}

BoundaryData effective_data(const ModelParams& params, const BoundaryData& data, const SolveConfig& cfg) {
  if (cfg.mollify_data && params.eps > 0.0 && data.mollifier_radius() == 0.0) return mollify(data, params.eps);
  return data;
}

double scaled_residual(const NodalField& u, const ModelParams& params) {
  const NodalField r = el_residual(u, params);
  return r.max_abs_interior() / u.grid().cell_volume();
}

double residual_floor(const NodalField& u, const ModelParams& params) {
  const Grid& g = u.grid();
  std::vector<AxisIntegrand> f;
  for (std::size_t i = 0; i < g.dim(); ++i) f.emplace_back(params.p[i], params.eps);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < g.dim(); ++i) {
      const double h = g.h(i);
      for (std::size_t nb : {k - g.stride(i), k + g.stride(i)}) {
        const double t = (u[nb] - u[k]) / h;
        sum += f[i].second(t) * (std::abs(u[nb]) + std::abs(u[k])) / (h * h);
      }
    }
    worst = std::max(worst, sum);
  }
  return std::numeric_limits<double>::epsilon() * worst;
}

SolveResult solve(const ModelParams& params, const BoundaryData& data, const Grid& grid, const SolveConfig& cfg) {
  cfg.validate();
  if (grid.dim() != params.p.dim() || data.dim() != grid.dim()) {
    throw InvalidArgument("grid, exponents and boundary data must share the dimension");
  }
  if (cfg.given && !(cfg.given->grid() == grid)) throw InvalidArgument("given initial field lives on another grid");

  const BoundaryData bd = effective_data(params, data, cfg);
  const NodalField sampled = sample(bd, grid);
  const std::size_t n = grid.size();
  std::vector<char> interior(n, 0);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < n; ++k) {
    interior[k] = grid.is_boundary(k) ? 0 : 1;
    if (!interior[k]) {
      lo = std::min(lo, sampled[k]);
      hi = std::max(hi, sampled[k]);
    }
  }

  Vec u;
  switch (cfg.initial) {
    case InitialGuess::Interpolation: u = interpolate_from_faces(grid, sampled.values()); break;
    case InitialGuess::HarmonicExtension: u = harmonic_extension(grid, sampled.values()); break;
    case InitialGuess::ZeroInterior:
      u = sampled.values();
      for (std::size_t k = 0; k < n; ++k) {
        if (interior[k]) u[k] = 0.0;
      }
      break;
    case InitialGuess::DataExtension: u = sampled.values(); break;
    case InitialGuess::Given:
      u = cfg.given->values();
      for (std::size_t k = 0; k < n; ++k) {
        if (!interior[k]) u[k] = sampled[k];
      }
      break;
  }
  // Truncation to the boundary range never raises the energy (every edge
  // difference shrinks) and the minimizer lies in that range.
  auto clip = [&](Vec& v) {
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!interior[k]) continue;
      const double c = std::clamp(v[k], lo, hi);
      changed = changed || c != v[k];
      v[k] = c;
    }
    return changed;
  };
  clip(u);

  Problem prob(grid, params);
  const double vol = grid.cell_volume();
  auto residual_of = [&](const Vec& g) {
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (interior[k]) m = std::max(m, std::abs(g[k]));
    }
    return m / vol;
  };
  auto mask = [&](Vec& g) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!interior[k]) g[k] = 0.0;
    }
  };

  Vec grad(n), z(n), d(n, 0.0), trial(n), grad_trial(n);
  __float128 energy_q = prob.energy_exact(u);
  double energy = static_cast<double>(energy_q);
  prob.gradient(u, grad);
  mask(grad);
  double residual = residual_of(grad);

  SolveResult out{NodalField(grid), energy, energy, residual, 0, false, {energy}};

  Preconditioning pre(grid, cfg.preconditioner);
  pre.refresh(prob, u, interior);
  pre.apply(grad, z, vol);
  double gz = dot(grad, z);
  for (std::size_t k = 0; k < n; ++k) d[k] = -z[k];

  const auto& ls = cfg.linesearch;
  long it = 0;
  long flat = 0;  // consecutive accepted steps without an exact energy decrease
  bool steepest = true;
  while (residual > cfg.tol && it < cfg.max_iters) {
    double slope = dot(grad, d);
    if (!(slope < 0.0)) {
      for (std::size_t k = 0; k < n; ++k) d[k] = -z[k];
      slope = -gz;
      steepest = true;
    }
    // Safeguarded Newton iteration on phi'(alpha) = 0, which is convex in alpha.
    auto [s0, c0] = prob.line_derivatives(u, d, 0.0);
    double alpha = c0 > 0.0 ? -s0 / c0 : 1.0;
    double a_lo = 0.0, a_hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 30; ++k) {
      const auto [s, c] = prob.line_derivatives(u, d, alpha);
      if (std::abs(s) <= 1e-3 * std::abs(s0)) break;
      if (s < 0.0) a_lo = alpha;
      else a_hi = alpha;
      double next = c > 0.0 ? alpha - s / c : std::numeric_limits<double>::quiet_NaN();
      if (!(next > a_lo && next < a_hi)) next = std::isfinite(a_hi) ? 0.5 * (a_lo + a_hi) : 2.0 * alpha;
      if (next == alpha) break;
      alpha = next;
    }

    bool accepted = false;
    __float128 e_trial_q = energy_q;
    bool clipped = false;
    // Below the resolution of E the Armijo test is noise. For convex phi,
    // phi'(alpha) <= 0 certifies phi(alpha) <= phi(0) instead.
    const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(energy);
    for (int b = 0; b < ls.max_backtracks; ++b, alpha *= ls.shrink) {
      if (!(alpha > 0.0)) break;
      const double wanted = ls.sufficient_decrease * alpha * slope;
      if (-wanted > resolution) {
        if (prob.energy_change(u, d, alpha) > wanted) continue;
      } else if (prob.line_derivatives(u, d, alpha).first > 0.0) {
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) trial[k] = u[k] + alpha * d[k];
      clipped = clip(trial);
      e_trial_q = prob.energy_exact(trial);
      if (e_trial_q <= energy_q) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (steepest) break;  // no descent left at working precision
      for (std::size_t k = 0; k < n; ++k) d[k] = -z[k];
      steepest = true;
      continue;
    }

    ++it;
    flat = e_trial_q < energy_q ? 0 : flat + 1;
    u.swap(trial);
    prob.gradient(u, grad_trial);
    mask(grad_trial);
    energy_q = e_trial_q;
    energy = static_cast<double>(energy_q);
    out.energy_history.push_back(energy);
    residual = residual_of(grad_trial);

    const bool refresh = it % cfg.refresh == 0;
    if (refresh) pre.refresh(prob, u, interior);
    Vec& z_new = trial;  // reuse storage, trial is free now
    pre.apply(grad_trial, z_new, vol);
    const double gz_new = dot(grad_trial, z_new);
    double beta = 0.0;
    if (!refresh && !clipped && gz > 0.0) {
      beta = std::max(0.0, (gz_new - dot(grad, z_new)) / gz);
    }
    for (std::size_t k = 0; k < n; ++k) d[k] = -z_new[k] + beta * d[k];
    steepest = beta == 0.0;
    grad.swap(grad_trial);
    z.swap(z_new);
    gz = gz_new;
    if (flat >= 10) break;  // stagnated at working precision
  }

  out.u = NodalField(grid, std::move(u));
  out.energy = energy;
  out.residual_max = residual;
  out.iterations = it;
  out.converged = residual <= cfg.tol;
  if (!out.converged && cfg.throw_on_failure) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "solver stopped after %ld iterations with residual %.3e > tol %.3e (round-off floor %.1e)", it,
                  residual, cfg.tol, residual_floor(out.u, params));
    throw ConvergenceError(buf, residual, it);
  }
  return out;
}

SweepResult sweep_eps(const ModelParams& params, const std::vector<double>& eps_list, const BoundaryData& data,
                      const Grid& grid, const SolveConfig& cfg) {
  if (eps_list.empty()) throw InvalidArgument("eps list is empty");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw InvalidArgument("eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw InvalidArgument("eps values must be strictly decreasing");
  }
  SweepResult out;
  SolveConfig local = cfg;
  local.initial = InitialGuess::DataExtension;
  for (double eps : eps_list) {
    const ModelParams pe(params.p, eps, params.eps0);
    const NodalField competitor = sample(effective_data(pe, data, local), grid);
    SweepRow row;
    row.eps = eps;
    // Same quadrature and rounding as SolveResult::energy, so the comparison is exact.
    row.competitor_energy = static_cast<double>(Problem(grid, pe).energy_exact(competitor.values()));
    SolveResult r = solve(pe, data, grid, local);
    row.energy = r.energy;
    row.residual_max = r.residual_max;
    row.iterations = r.iterations;
    out.energy_bound_holds = out.energy_bound_holds && row.energy <= row.competitor_energy;
    out.table.push_back(row);
    out.solutions.push_back(std::move(r));
  }
  const SubRegion dom = SubRegion::domain(grid);
  for (std::size_t k = 0; k + 1 < out.solutions.size(); ++k) {
    const NodalField& a = out.solutions[k].u;
    const NodalField& b = out.solutions[k + 1].u;
    NodalField diff(grid);
    for (std::size_t m = 0; m < grid.size(); ++m) diff[m] = a[m] - b[m];
    out.table[k].diff_lp1 = lebesgue_norm(diff, params.p.min(), dom);
    for (std::size_t i = 0; i < grid.dim(); ++i) {
      const NodalField da = discrete_gradient(a, i), db = discrete_gradient(b, i);
      for (std::size_t m = 0; m < grid.size(); ++m) diff[m] = da[m] - db[m];
      out.table[k].diff_grad.push_back(lebesgue_norm(diff, params.p[i], dom));
    }
  }
  return out;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& os) {
  const std::size_t dim = sweep.solutions.empty() ? 0 : sweep.solutions.front().u.grid().dim();
  os << "eps,energy,residual_max,iters,diff_lp1";
  for (std::size_t i = 0; i < dim; ++i) os << ",diff_grad_" << i + 1;
  os << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& row : sweep.table) {
    os << num(row.eps) << ',' << num(row.energy) << ',' << num(row.residual_max) << ',' << row.iterations << ',';
    if (row.diff_lp1) os << num(*row.diff_lp1);
    for (std::size_t i = 0; i < dim; ++i) {
      os << ',';
      if (i < row.diff_grad.size()) os << num(row.diff_grad[i]);
    }
    os << '\n';
  }
}

}  // namespace orthlip
