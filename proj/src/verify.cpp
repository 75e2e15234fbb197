#include "orthlip/verify.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <future>
#include <map>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "orthlip/error.hpp"

namespace orthlip {

namespace {

using json = nlohmann::ordered_json;

double power(double x, double e) { return e == 0.0 ? 1.0 : std::pow(x, e); }

double ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs > 0.0 ? HUGE_VAL : 0.0;
}

// Derivative fields of one solution, computed on demand.
class Fields {
 public:
  Fields(const SolveResult& r, const ModelParams& params) : u_(r.u), g_(r.u.grid()), params_(params) {
    if (!r.converged) throw InvalidArgument("verification needs a converged solution");
    if (params.p.dim() != g_.dim()) throw InvalidArgument("exponents and grid differ in dimension");
    for (std::size_t i = 0; i < g_.dim(); ++i) {
      d_.push_back(discrete_gradient(u_, i));
      NodalField g2(g_);
      for (std::size_t k = 0; k < g_.size(); ++k) g2[k] = g_second(i, d_[i][k], params);
      g2_.push_back(std::move(g2));
    }
  }

  const Grid& grid() const { return g_; }
  std::size_t dim() const { return g_.dim(); }
  const NodalField& u() const { return u_; }
  double d(std::size_t i, std::size_t k) const { return d_[i][k]; }
  double g2(std::size_t i, std::size_t k) const { return g2_[i][k]; }

  /// u_{x_i x_j}. Values below the rounding resolution of the nodal data are
  /// set to zero, so affine fields give exact zeros.
  const NodalField& dd(std::size_t i, std::size_t j) {
    const auto key = std::make_pair(std::min(i, j), std::max(i, j));
    auto it = dd_.find(key);
    if (it != dd_.end()) return it->second;
    NodalField f = discrete_second_derivative(u_, key.first, key.second);
    const double floor = 64.0 * DBL_EPSILON * u_.max_abs() / (g_.h(i) * g_.h(j));
    for (auto& v : f.values()) {
      if (std::abs(v) <= floor) v = 0.0;
    }
    return dd_.emplace(key, std::move(f)).first->second;
  }

  template <class F>
  double integral(F&& f, const SubRegion& region) const {
    NodalField field(g_);
    for (std::size_t k = 0; k < g_.size(); ++k) field[k] = f(k);
    return integrate(field, region);
  }

  template <class F>
  double integral(F&& f) const {
    return integral(std::forward<F>(f), SubRegion::domain(g_));
  }

  void base_params(EstimateReport& r) const {
    for (std::size_t i = 0; i < dim(); ++i) r.params.emplace_back("p" + std::to_string(i + 1), params_.p[i]);
    r.params.emplace_back("eps", params_.eps);
    r.params.emplace_back("h", g_.max_h());
  }

 private:
  const NodalField& u_;
  const Grid& g_;
  const ModelParams& params_;
  std::vector<NodalField> d_;
  std::vector<NodalField> g2_;
  std::map<std::pair<std::size_t, std::size_t>, NodalField> dd_;
};

void check_axis(std::size_t axis, std::size_t dim) {
  if (axis >= dim) throw InvalidArgument("axis " + std::to_string(axis + 1) + " exceeds the dimension");
}

// Second differences are meaningful two nodes away from the boundary.
Cutoff resolved_cutoff(const CutoffSpec& spec, const Grid& g) {
  Cutoff c = make_cutoff(spec, g);
  if (g.distance_to_boundary(spec.center) - spec.outer < 2.0 * g.max_h()) {
    throw InvalidArgument("cutoff unresolved by grid: B_outer needs a margin of two cells");
  }
  return c;
}

void radii_params(EstimateReport& r, const CutoffSpec& c) {
  r.params.emplace_back("r_inner", c.inner);
  r.params.emplace_back("r_outer", c.outer);
}

void finish(EstimateReport& r, double acceptance, double slack = 0.0) {
  r.pass = r.lhs <= acceptance * r.rhs_core + slack;
}

// Shared by the convex and the negative-power Caccioppoli checks:
//   lhs = sum_i int g''_i u_{ij}^2 w(u_j) eta^2,  rhs = sum_i int g''_i v(u_j) eta_i^2.
template <class W, class V>
void caccioppoli_sides(Fields& f, std::size_t j, const Cutoff& c, W&& w, V&& v, EstimateReport& r) {
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    const NodalField& uij = f.dd(i, j);
    lhs += f.integral([&](std::size_t k) {
      const double e = c.eta[k];
      return e == 0.0 || uij[k] == 0.0 ? 0.0 : f.g2(i, k) * uij[k] * uij[k] * w(f.d(j, k)) * e * e;
    });
    rhs += f.integral([&](std::size_t k) {
      const double gi = c.grad[i][k];
      return gi == 0.0 ? 0.0 : f.g2(i, k) * v(f.d(j, k)) * gi * gi;
    });
  }
  r.lhs = lhs;
  r.rhs_core = rhs;
  r.empirical_constant = ratio(lhs, rhs);
}

double grad_eta_sq(const Cutoff& c, std::size_t k, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) s += c.grad[i][k] * c.grad[i][k];
  return s;
}

double sum_g2(const Fields& f, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) s += f.g2(i, k);
  return s;
}

double trend_growth(double prev, double cur) {
  if (prev > 0.0) return cur / prev - 1.0;
  return cur > 0.0 ? HUGE_VAL : 0.0;
}

json number_map(const std::vector<std::pair<std::string, double>>& v) {
  json o = json::object();
  for (const auto& [k, x] : v) o[k] = x;
  return o;
}

json report_object(const EstimateReport& r) {
  json o;
  o["check"] = r.check;
  o["params"] = number_map(r.params);
  o["lhs"] = r.lhs;
  o["rhs_core"] = r.rhs_core;
  o["constant"] = r.empirical_constant;
  o["pass"] = r.pass;
  if (!r.terms.empty()) o["terms"] = number_map(r.terms);
  if (!r.note.empty()) o["note"] = r.note;
  return o;
}

}  // namespace

double EstimateReport::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  throw InvalidArgument("report has no parameter " + key);
}

double EstimateReport::term(const std::string& key) const {
  for (const auto& [k, v] : terms) {
    if (k == key) return v;
  }
  throw InvalidArgument("report has no term " + key);
}

double default_acceptance(double alpha) {
  if (!(alpha > -1.0)) throw InvalidArgument("alpha must exceed -1");
  return 16.0 / ((1.0 + alpha) * (1.0 + alpha));
}

EstimateReport check_caccioppoli(const SolveResult& u, const ModelParams& params, double phi_power, std::size_t j,
                                 const CutoffSpec& eta, double acceptance) {
  if (!(phi_power >= 1.0) || !std::isfinite(phi_power)) throw InvalidArgument("phi_power must be >= 1");
  Fields f(u, params);
  check_axis(j, f.dim());
  const Cutoff c = resolved_cutoff(eta, f.grid());
  EstimateReport r;
  r.check = "caccioppoli";
  f.base_params(r);
  radii_params(r, eta);
  r.params.emplace_back("j", static_cast<double>(j + 1));
  r.params.emplace_back("phi_power", phi_power);
  const double a = phi_power;
  caccioppoli_sides(
      f, j, c, [&](double t) { return a * a * power(std::abs(t), 2.0 * a - 2.0); },
      [&](double t) { return power(std::abs(t), 2.0 * a); }, r);
  finish(r, acceptance > 0.0 ? acceptance : default_acceptance());
  return r;
}

EstimateReport check_caccioppoli_negative(const SolveResult& u, const ModelParams& params, double alpha,
                                          std::size_t j, const CutoffSpec& eta, double acceptance) {
  if (!(alpha > -1.0 && alpha <= 0.0)) throw InvalidArgument("alpha must lie in (-1, 0]");
  Fields f(u, params);
  check_axis(j, f.dim());
  const Cutoff c = resolved_cutoff(eta, f.grid());
  EstimateReport r;
  r.check = "caccioppoli_negative";
  f.base_params(r);
  radii_params(r, eta);
  r.params.emplace_back("j", static_cast<double>(j + 1));
  r.params.emplace_back("alpha", alpha);
  caccioppoli_sides(
      f, j, c,
      [&](double t) {
        const double at = std::abs(t);
        if (alpha < 0.0 && at < 1e-14) return 0.0;
        return power(at, alpha);
      },
      [&](double t) { return power(std::abs(t), alpha + 2.0); }, r);
  finish(r, acceptance > 0.0 ? acceptance : default_acceptance(alpha));
  return r;
}

EstimateReport check_weird_caccioppoli(const SolveResult& u, const ModelParams& params, double s, double m,
                                       std::size_t j, std::size_t k, const CutoffSpec& eta, double acceptance) {
  if (!(s >= 1.0 && m >= s) || !std::isfinite(m)) throw InvalidArgument("need 1 <= s <= m");
  Fields f(u, params);
  check_axis(j, f.dim());
  check_axis(k, f.dim());
  const Cutoff c = resolved_cutoff(eta, f.grid());
  const std::size_t dim = f.dim();
  double lhs = 0.0, t3 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const NodalField& uij = f.dd(i, j);
    lhs += f.integral([&](std::size_t n) {
      const double e = c.eta[n];
      if (e == 0.0 || uij[n] == 0.0) return 0.0;
      return f.g2(i, n) * uij[n] * uij[n] * power(std::abs(f.d(j, n)), 2.0 * s - 2.0) *
             power(std::abs(f.d(k, n)), 2.0 * m) * e * e;
    });
    t3 += f.integral([&](std::size_t n) {
      const double e = c.eta[n];
      if (e == 0.0 || uij[n] == 0.0) return 0.0;
      return f.g2(i, n) * uij[n] * uij[n] * power(std::abs(f.d(j, n)), 4.0 * s - 2.0) *
             power(std::abs(f.d(k, n)), 2.0 * m - 2.0 * s) * e * e;
    });
  }
  const double t1 = f.integral([&](std::size_t n) {
    return sum_g2(f, n) * power(std::abs(f.d(j, n)), 2.0 * s + 2.0 * m) * grad_eta_sq(c, n, dim);
  });
  const double t2 = f.integral([&](std::size_t n) {
    return sum_g2(f, n) * power(std::abs(f.d(k, n)), 2.0 * s + 2.0 * m) * grad_eta_sq(c, n, dim);
  });
  EstimateReport r;
  r.check = "weird_caccioppoli";
  f.base_params(r);
  radii_params(r, eta);
  r.params.emplace_back("j", static_cast<double>(j + 1));
  r.params.emplace_back("k", static_cast<double>(k + 1));
  r.params.emplace_back("s", s);
  r.params.emplace_back("m", m);
  r.terms = {{"T1", t1}, {"T2", t2}, {"T3", t3}};
  r.lhs = lhs;
  r.rhs_core = t1 + (m + 1.0) * t2;
  r.empirical_constant = ratio(std::max(lhs - t3, 0.0), r.rhs_core);
  finish(r, acceptance > 0.0 ? acceptance : default_acceptance(), t3);
  return r;
}

EstimateReport check_power_caccioppoli(const SolveResult& u, const ModelParams& params, int ell0, std::size_t k,
                                       const CutoffSpec& eta, double acceptance) {
  if (ell0 < 1 || ell0 > 30) throw InvalidArgument("ell0 must lie in 1..30");
  const double q = std::ldexp(1.0, ell0) - 1.0;
  if (2.0 * q + params.p.max() > 64.0) {
    throw RangeError("2q + p_N = " + std::to_string(2.0 * q + params.p.max()) + " exceeds 64");
  }
  Fields f(u, params);
  check_axis(k, f.dim());
  const Cutoff c = resolved_cutoff(eta, f.grid());
  const std::size_t dim = f.dim();
  const double pk = params.p[k];
  const double lead = q + 0.5 * pk;  // d/dt (|t|^{q+(p_k-2)/2} t) = lead |t|^{q+(p_k-2)/2}
  double lhs = 0.0;
  for (std::size_t jj = 0; jj < dim; ++jj) {
    const NodalField& ukj = f.dd(k, jj);
    lhs += f.integral([&](std::size_t n) {
      const double e = c.eta[n];
      if (e == 0.0 || ukj[n] == 0.0) return 0.0;
      const double dv = lead * power(std::abs(f.d(k, n)), q + 0.5 * (pk - 2.0)) * ukj[n];
      return dv * dv * e * e;
    });
  }
  const double all = f.integral([&](std::size_t n) {
    double s = 0.0;
    for (std::size_t jj = 0; jj < dim; ++jj) s += power(std::abs(f.d(jj, n)), 2.0 * q + 2.0);
    return sum_g2(f, n) * s * grad_eta_sq(c, n, dim);
  });
  const double own = f.integral([&](std::size_t n) {
    return sum_g2(f, n) * power(std::abs(f.d(k, n)), 2.0 * q + 2.0) * grad_eta_sq(c, n, dim);
  });
  EstimateReport r;
  r.check = "power_caccioppoli";
  f.base_params(r);
  radii_params(r, eta);
  r.params.emplace_back("k", static_cast<double>(k + 1));
  r.params.emplace_back("ell0", ell0);
  r.params.emplace_back("q", q);
  r.terms = {{"all_axes", all}, {"own_axis", own}};
  const double q5 = q * q * q * q * q;
  r.lhs = lhs;
  r.rhs_core = q5 * (all + own);
  r.empirical_constant = ratio(lhs, r.rhs_core);
  finish(r, acceptance > 0.0 ? acceptance : default_acceptance());
  return r;
}

EstimateReport check_self_improving(const SolveResult& u, const ModelParams& params, std::size_t k, double alpha,
                                    const CutoffSpec& balls, double acceptance) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must exceed -1");
  Fields f(u, params);
  check_axis(k, f.dim());
  const Grid& g = f.grid();
  const double r0 = balls.inner, R0 = balls.outer;
  if (!(r0 >= 2.0 * g.max_h() && R0 - r0 >= 2.0 * g.max_h())) {
    throw InvalidArgument("regions unresolved by grid: r0 and R0 - r0 need two cells");
  }
  if (!(g.distance_to_boundary(balls.center) - R0 >= g.max_h())) {
    throw InvalidArgument("regions unresolved by grid: B_R0 must stay a cell away from the boundary");
  }
  const SubRegion inner = SubRegion::ball(balls.center, r0), outer = SubRegion::ball(balls.center, R0);
  const double pk = params.p[k];
  const double a = pk + 2.0 + alpha;
  const double lhs = f.integral([&](std::size_t n) { return power(std::abs(f.d(k, n)), a); }, inner);
  const double big_m = f.u().max_abs();
  const double ratio_m = big_m / (R0 - r0);
  const double first = std::pow(R0, static_cast<double>(g.dim())) * (power(ratio_m, a) + params.eps0);
  const double cross = f.integral(
      [&](std::size_t n) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.dim(); ++i) {
          if (i != k) s += power(std::abs(f.d(i, n)), (params.p[i] - 2.0) * a / pk);
        }
        return s;
      },
      outer);
  const double second = power(ratio_m, 2.0 * a / pk) * cross;
  EstimateReport r;
  r.check = "self_improving";
  f.base_params(r);
  radii_params(r, balls);
  r.params.emplace_back("k", static_cast<double>(k + 1));
  r.params.emplace_back("alpha", alpha);
  r.params.emplace_back("u_max", big_m);
  r.terms = {{"volume_term", first}, {"cross_term", second}};
  r.lhs = lhs;
  r.rhs_core = first + second;
  r.empirical_constant = ratio(lhs, r.rhs_core);
  finish(r, acceptance > 0.0 ? acceptance : default_acceptance());
  return r;
}

EstimateReport check_lipschitz_level(const SolveResult& u, const ModelParams& params, double gamma, double theta,
                                     const CutoffSpec& balls) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw InvalidArgument("Theta must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  Fields f(u, params);
  const Grid& g = f.grid();
  if (!(balls.inner > 0.0 && balls.inner < balls.outer) || g.distance_to_boundary(balls.center) <= balls.outer) {
    throw InvalidArgument("regions must be concentric balls strictly inside the domain");
  }
  NodalField big_u(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.dim(); ++i) m = std::max(m, std::abs(f.d(i, n)));
    big_u[n] = m;
  }
  const double lhs = lebesgue_norm(big_u, HUGE_VAL, SubRegion::ball(balls.center, balls.inner));
  const double mass = f.integral([&](std::size_t n) { return power(big_u[n], gamma); },
                                 SubRegion::ball(balls.center, balls.outer));
  EstimateReport r;
  r.check = "lipschitz";
  f.base_params(r);
  radii_params(r, balls);
  r.params.emplace_back("gamma", gamma);
  r.params.emplace_back("Theta", theta);
  r.lhs = lhs;
  r.rhs_core = std::pow(mass + 1.0, theta / gamma);
  r.empirical_constant = ratio(lhs, r.rhs_core);
  r.pass = std::isfinite(lhs) && std::isfinite(r.rhs_core);
  if (gamma < params.p.max() + 2.0) {
    r.pass = false;
    r.note = "parameter violation: gamma < p_N + 2";
  }
  return r;
}

EstimateReport check_higher_integrability(const SolveResult& u, const ExponentVector& p, double q0,
                                          const SubRegion& region) {
  if (!(q0 >= 2.0) || !std::isfinite(q0)) throw InvalidArgument("q0 must be >= 2");
  const ModelParams params(p, 0.0);
  Fields f(u, params);
  if (!(region.clearance(f.grid()) > 0.0)) throw InvalidArgument("region must lie strictly inside the domain");
  EstimateReport r;
  r.check = "higher_integrability";
  for (std::size_t i = 0; i < f.dim(); ++i) r.params.emplace_back("p" + std::to_string(i + 1), p[i]);
  r.params.emplace_back("h", f.grid().max_h());
  r.params.emplace_back("q0", q0);
  double lhs = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    const double term = f.integral([&](std::size_t n) { return power(std::abs(f.d(i, n)), p[i] * q0); }, region);
    r.terms.emplace_back("axis" + std::to_string(i + 1), term);
    lhs += term;
  }
  r.lhs = lhs;
  r.rhs_core = 1.0;
  r.empirical_constant = lhs;
  r.pass = std::isfinite(lhs);
  return r;
}

EstimateReport check_higher_differentiability(const SolveResult& u, const ExponentVector& p,
                                              const SubRegion& region) {
  const ModelParams params(p, 0.0);
  Fields f(u, params);
  const Grid& g = f.grid();
  if (!(region.clearance(g) >= 2.0 * g.max_h())) {
    throw InvalidArgument("difference quotients need a margin of two cells between region and boundary");
  }
  EstimateReport r;
  r.check = "higher_differentiability";
  for (std::size_t i = 0; i < f.dim(); ++i) r.params.emplace_back("p" + std::to_string(i + 1), p[i]);
  r.params.emplace_back("h", g.max_h());
  double lhs = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    NodalField v(g);
    const double e = 0.5 * (p[i] - 2.0);
    for (std::size_t n = 0; n < g.size(); ++n) v[n] = power(std::abs(f.d(i, n)), e) * f.d(i, n);
    const double floor = 64.0 * DBL_EPSILON * v.max_abs();
    double sum = 0.0;
    for (std::size_t j = 0; j < f.dim(); ++j) {
      const std::size_t st = g.stride(j);
      const std::size_t last = g.nodes(j) - 1;
      const double h = g.h(j);
      sum += f.integral(
          [&](std::size_t n) {
            if (g.multi_index(n)[j] == last) return 0.0;
            const double dv = v[n + st] - v[n];
            return std::abs(dv) <= floor ? 0.0 : (dv / h) * (dv / h);
          },
          region);
    }
    r.terms.emplace_back("V" + std::to_string(i + 1), sum);
    lhs += sum;
  }
  r.lhs = lhs;
  r.rhs_core = 1.0;
  r.empirical_constant = lhs;
  r.pass = std::isfinite(lhs);
  return r;
}

std::string check_name(CheckKind kind) {
  switch (kind) {
    case CheckKind::Caccioppoli: return "caccioppoli";
    case CheckKind::CaccioppoliNegative: return "caccioppoli_negative";
    case CheckKind::WeirdCaccioppoli: return "weird_caccioppoli";
    case CheckKind::PowerCaccioppoli: return "power_caccioppoli";
    case CheckKind::SelfImproving: return "self_improving";
    case CheckKind::Lipschitz: return "lipschitz";
    case CheckKind::HigherIntegrability: return "higher_integrability";
    case CheckKind::HigherDifferentiability: return "higher_differentiability";
  }
  return "unknown";
}

CheckKind parse_check_kind(const std::string& name) {
  for (auto kind : {CheckKind::Caccioppoli, CheckKind::CaccioppoliNegative, CheckKind::WeirdCaccioppoli,
                    CheckKind::PowerCaccioppoli, CheckKind::SelfImproving, CheckKind::Lipschitz,
                    CheckKind::HigherIntegrability, CheckKind::HigherDifferentiability}) {
    if (check_name(kind) == name) return kind;
  }
  throw InvalidArgument("unknown check '" + name + "'");
}

bool tracks_lhs(CheckKind kind) {
  return kind == CheckKind::Lipschitz || kind == CheckKind::HigherIntegrability ||
         kind == CheckKind::HigherDifferentiability;
}

EstimateReport run_check(const CheckSpec& c, const SolveResult& u, const ModelParams& params) {
  switch (c.kind) {
    case CheckKind::Caccioppoli: return check_caccioppoli(u, params, c.phi_power, c.j, c.balls, c.acceptance);
    case CheckKind::CaccioppoliNegative:
      return check_caccioppoli_negative(u, params, c.alpha, c.j, c.balls, c.acceptance);
    case CheckKind::WeirdCaccioppoli:
      return check_weird_caccioppoli(u, params, c.s, c.m, c.j, c.k, c.balls, c.acceptance);
    case CheckKind::PowerCaccioppoli: return check_power_caccioppoli(u, params, c.ell0, c.k, c.balls, c.acceptance);
    case CheckKind::SelfImproving: return check_self_improving(u, params, c.k, c.alpha, c.balls, c.acceptance);
    case CheckKind::Lipschitz: {
      const double gamma = c.gamma > 0.0 ? c.gamma : params.p.max() + 2.0;
      return check_lipschitz_level(u, params, gamma, c.theta, c.balls);
    }
    case CheckKind::HigherIntegrability:
      return check_higher_integrability(u, params.p, c.q0, SubRegion::ball(c.balls.center, c.balls.outer));
    case CheckKind::HigherDifferentiability:
      return check_higher_differentiability(u, params.p, SubRegion::ball(c.balls.center, c.balls.inner));
  }
  throw InvalidArgument("unknown check kind");
}

std::vector<RefinementStudy> refinement_study(const ModelParams& params, const BoundaryData& data,
                                              const SolveConfig& solve_cfg, const StudyConfig& study,
                                              const std::vector<CheckSpec>& checks,
                                              std::vector<SolveResult>* solutions) {
  const auto& res = study.resolutions;
  if (res.size() < 2) throw InvalidArgument("a refinement study needs at least two resolutions");
  for (std::size_t l = 0; l < res.size(); ++l) {
    if (res[l] < 3) throw InvalidArgument("resolutions need at least 3 nodes per axis");
    if (l > 0 && res[l] - 1 != 2 * (res[l - 1] - 1)) {
      throw InvalidArgument("resolutions must be nested: each spacing halves the previous one");
    }
  }
  if (!(study.final_tolerance >= 0.0 && study.spread_tolerance >= 0.0)) {
    throw InvalidArgument("study tolerances must be non-negative");
  }
  for (const auto& c : checks) {
    const Point& x = c.balls.center;
    for (std::size_t d = 0; d < study.dim; ++d) {
      if (!(x[d] - c.balls.outer > 0.0 && x[d] + c.balls.outer < 1.0)) {
        throw InvalidArgument("study regions must lie strictly inside the unit domain");
      }
    }
  }

  // Levels are independent solves.
  std::vector<SolveResult> solved;
  solved.reserve(res.size());
  unsigned threads = study.threads ? study.threads : std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < res.size(); begin += threads) {
    std::vector<std::future<SolveResult>> batch;
    for (std::size_t l = begin; l < std::min(res.size(), begin + threads); ++l) {
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                 [&, l] { return solve(params, data, Grid::unit(study.dim, res[l]), solve_cfg); }));
    }
    for (auto& f : batch) solved.push_back(f.get());
  }

  std::vector<RefinementStudy> out;
  for (const auto& c : checks) {
    RefinementStudy s;
    s.check = check_name(c.kind);
    bool levels_pass = true;
    for (const auto& sol : solved) {
      RefinementLevel level{sol.u.grid().max_h(), run_check(c, sol, params)};
      levels_pass = levels_pass && level.report.pass;
      s.trend.push_back(tracks_lhs(c.kind) ? level.report.lhs : level.report.empirical_constant);
      s.levels.push_back(std::move(level));
    }
    for (std::size_t l = 1; l < s.trend.size(); ++l) s.ratios.push_back(ratio(s.trend[l], s.trend[l - 1]));
    s.final_growth = trend_growth(s.trend[s.trend.size() - 2], s.trend.back());
    const auto [lo, hi] = std::minmax_element(s.trend.begin(), s.trend.end());
    s.spread = *hi == *lo ? 0.0 : trend_growth(*lo, *hi);
    s.pass = levels_pass && s.final_growth <= study.final_tolerance && s.spread <= study.spread_tolerance;
    out.push_back(std::move(s));
  }
  if (solutions) *solutions = std::move(solved);
  return out;
}

RefinementStudy check_lipschitz_estimate(const ModelParams& params, const BoundaryData& data,
                                         const SolveConfig& solve_cfg, double gamma, double theta,
                                         const CutoffSpec& balls, const StudyConfig& study) {
  CheckSpec spec;
  spec.kind = CheckKind::Lipschitz;
  spec.gamma = gamma;
  spec.theta = theta;
  spec.balls = balls;
  return refinement_study(params, data, solve_cfg, study, {spec}).front();
}

std::string report_json(const EstimateReport& report, int indent) { return report_object(report).dump(indent); }

std::string study_json(const RefinementStudy& study, int indent) {
  json o;
  o["check"] = study.check;
  json levels = json::array();
  for (const auto& l : study.levels) {
    json row;
    row["h"] = l.h;
    row["report"] = report_object(l.report);
    levels.push_back(std::move(row));
  }
  o["levels"] = std::move(levels);
  o["trend"] = study.trend;
  o["ratios"] = study.ratios;
  o["final_growth"] = study.final_growth;
  o["spread"] = study.spread;
  o["pass"] = study.pass;
  return o.dump(indent);
}

void write_study_csv(const RefinementStudy& study, std::ostream& os) {
  os << "h,lhs,rhs_core,constant,pass\n";
  char buf[128];
  for (const auto& l : study.levels) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", l.h, l.report.lhs, l.report.rhs_core,
                  l.report.empirical_constant, l.report.pass ? 1 : 0);
    os << buf;
  }
}

}  // namespace orthlip
