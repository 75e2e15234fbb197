#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "orthlip/grid.hpp"
#include "orthlip/model.hpp"
#include "orthlip/solver.hpp"

namespace orthlip {

struct EstimateReport {
  std::string check;
  double lhs = 0.0;
  /// Right side with the unknown constant stripped.
  double rhs_core = 0.0;
  /// lhs / rhs_core (0 when both vanish, +inf when only rhs_core does).
  double empirical_constant = 0.0;
  /// Inputs in insertion order: exponents, eps, h, radii, check exponents.
  std::vector<std::pair<std::string, double>> params;
  /// Named partial integrals, for checks whose right side has several terms.
  std::vector<std::pair<std::string, double>> terms;
  bool pass = false;
  /// Why pass is false when it is not a plain inequality failure.
  std::string note;

  double param(const std::string& key) const;
  double term(const std::string& key) const;
};

/// Acceptance constant used when a check is given none: 16 / (1 + alpha)^2,
/// four times the sharp constant of the negative-power Caccioppoli bound.
double default_acceptance(double alpha = 0.0);

/// sum_i int g''_i(u_i) |(Phi(u_j))_i|^2 eta^2  vs  sum_i int g''_i(u_i) Phi(u_j)^2 eta_i^2
/// with Phi(t) = |t|^{phi_power - 1} t, phi_power >= 1. j is zero-based.
EstimateReport check_caccioppoli(const SolveResult& u, const ModelParams& params, double phi_power, std::size_t j,
                                 const CutoffSpec& eta, double acceptance = 0.0);

/// sum_i int g''_i u_{ij}^2 |u_j|^alpha eta^2  vs  sum_i int g''_i |u_j|^{alpha+2} eta_i^2,
/// -1 < alpha <= 0; the integrand is 0 where |u_j| < 1e-14.
EstimateReport check_caccioppoli_negative(const SolveResult& u, const ModelParams& params, double alpha,
                                          std::size_t j, const CutoffSpec& eta, double acceptance = 0.0);

/// Staircase form with Phi(t) = t^{s-1}, Psi(t) = t^m, 1 <= s <= m:
///   lhs   = sum_i int g''_i u_{ij}^2 |u_j|^{2s-2} |u_k|^{2m} eta^2
///   T1    = sum_i int g''_i |u_j|^{2s+2m} |grad eta|^2
///   T2    = sum_i int g''_i |u_k|^{2s+2m} |grad eta|^2
///   T3    = sum_i int g''_i u_{ij}^2 |u_j|^{4s-2} |u_k|^{2m-2s} eta^2
/// rhs_core = T1 + (m+1) T2, empirical constant (lhs - T3)_+ / rhs_core,
/// pass iff lhs <= K rhs_core + T3.
EstimateReport check_weird_caccioppoli(const SolveResult& u, const ModelParams& params, double s, double m,
                                       std::size_t j, std::size_t k, const CutoffSpec& eta, double acceptance = 0.0);

/// q = 2^ell0 - 1. lhs = int |grad(|u_k|^{q + (p_k-2)/2} u_k)|^2 eta^2,
/// rhs_core = q^5 (sum_{i,j} int g''_i |u_j|^{2q+2} |grad eta|^2 + sum_i int g''_i |u_k|^{2q+2} |grad eta|^2).
/// Throws RangeError when 2q + p_N > 64.
EstimateReport check_power_caccioppoli(const SolveResult& u, const ModelParams& params, int ell0, std::size_t k,
                                       const CutoffSpec& eta, double acceptance = 0.0);

/// Concentric balls B_r0 in B_R0 (center, inner = r0, outer = R0).
/// lhs = int_{B_r0} |u_k|^{p_k+2+alpha}; with M = max |u| and a = p_k+2+alpha,
/// rhs_core = R0^N ((M/(R0-r0))^a + eps0) + (M/(R0-r0))^{2a/p_k} int_{B_R0} sum_{i!=k} |u_i|^{(p_i-2) a / p_k}.
EstimateReport check_self_improving(const SolveResult& u, const ModelParams& params, std::size_t k, double alpha,
                                    const CutoffSpec& balls, double acceptance = 0.0);

/// One level of the Lipschitz estimate: lhs = max over B_r0 of max_k |u_k|,
/// rhs_core = (int_{B_R0} (max_k |u_k|)^gamma + 1)^{Theta/gamma}. The (R0-r0)^{-beta}
/// factor is constant for fixed radii and left in the measured constant.
/// pass is false, with a note, when gamma < p_N + 2.
EstimateReport check_lipschitz_level(const SolveResult& u, const ModelParams& params, double gamma, double theta,
                                     const CutoffSpec& balls);

/// lhs = sum_i int_region |u_i|^{p_i q0}; rhs_core = 1. Boundedness is judged
/// by a refinement study.
EstimateReport check_higher_integrability(const SolveResult& u, const ExponentVector& p, double q0,
                                          const SubRegion& region);

/// V_i = |u_i|^{(p_i-2)/2} u_i; lhs = sum_{i,j} || (V_i(x + h e_j) - V_i(x)) / h ||^2_{L^2(region)},
/// per-i sums in terms ("V1", "V2", ...); rhs_core = 1. The region needs a
/// margin of two cells from the boundary.
EstimateReport check_higher_differentiability(const SolveResult& u, const ExponentVector& p, const SubRegion& region);

enum class CheckKind {
  Caccioppoli,
  CaccioppoliNegative,
  WeirdCaccioppoli,
  PowerCaccioppoli,
  SelfImproving,
  Lipschitz,
  HigherIntegrability,
  HigherDifferentiability,
};

std::string check_name(CheckKind kind);
/// Throws InvalidArgument for unknown names.
CheckKind parse_check_kind(const std::string& name);

/// Parameters of one check; fields a kind does not use are ignored. Axes are
/// zero-based. The balls double as cutoff radii (eta == 1 on B_inner) and as
/// the region pair. higher_integrability integrates over B_outer,
/// higher_differentiability over B_inner.
struct CheckSpec {
  CheckKind kind = CheckKind::Caccioppoli;
  std::size_t j = 0;
  std::size_t k = 0;
  double phi_power = 1.0;
  double alpha = 0.0;
  double s = 1.0;
  double m = 1.0;
  int ell0 = 1;
  double q0 = 2.0;
  double gamma = 0.0;
  double theta = 1.0;
  CutoffSpec balls{{0.5, 0.5, 0.5}, 0.15, 0.3};
  double acceptance = 0.0;  ///< 0 selects default_acceptance(alpha)
};

EstimateReport run_check(const CheckSpec& spec, const SolveResult& u, const ModelParams& params);

/// Quantity whose refinement trend decides a study: the empirical constant
/// for inequality checks, lhs for boundedness checks.
bool tracks_lhs(CheckKind kind);

struct RefinementLevel {
  double h = 0.0;
  EstimateReport report;
};

struct RefinementStudy {
  std::string check;
  std::vector<RefinementLevel> levels;
  /// Tracked quantity per level and its successive ratios.
  std::vector<double> trend;
  std::vector<double> ratios;
  /// trend_last / trend_before_last - 1
  double final_growth = 0.0;
  /// max(trend) / min(trend) - 1
  double spread = 0.0;
  bool pass = false;
};

struct StudyConfig {
  std::size_t dim = 2;
  /// Nodes per axis on [0,1]^dim, each grid halving the previous spacing.
  std::vector<std::size_t> resolutions{17, 33, 65};
  double final_tolerance = 0.05;
  double spread_tolerance = 0.25;
  /// Concurrent level solves; 0 means one per hardware thread.
  unsigned threads = 0;
};

/// Solves once per level and runs every check on each solution. Regions are
/// the same continuous balls on every level and must stay strictly inside the
/// domain. A check passes when all its levels pass, final_growth <=
/// final_tolerance and spread <= spread_tolerance.
std::vector<RefinementStudy> refinement_study(const ModelParams& params, const BoundaryData& data,
                                              const SolveConfig& solve_cfg, const StudyConfig& study,
                                              const std::vector<CheckSpec>& checks,
                                              std::vector<SolveResult>* solutions = nullptr);

/// Lipschitz study with gamma and Theta supplied, e.g. gamma_{J-1} and Theta
/// from the exponent schedule.
RefinementStudy check_lipschitz_estimate(const ModelParams& params, const BoundaryData& data,
                                         const SolveConfig& solve_cfg, double gamma, double theta,
                                         const CutoffSpec& balls, const StudyConfig& study);

/// {"check", "params", "lhs", "rhs_core", "constant", "pass", ...} as one JSON object.
std::string report_json(const EstimateReport& report, int indent = -1);
std::string study_json(const RefinementStudy& study, int indent = -1);
/// CSV with columns h,lhs,rhs_core,constant,pass.
void write_study_csv(const RefinementStudy& study, std::ostream& os);

}  // namespace orthlip
