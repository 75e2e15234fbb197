#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orthlip/grid.hpp"
#include "orthlip/model.hpp"

namespace orthlip {

enum class InitialGuess {
  Interpolation,      ///< mean over axes of the linear blend between opposite faces
  HarmonicExtension,  ///< discrete harmonic function with the boundary values
  ZeroInterior,
  DataExtension,      ///< the (mollified) boundary data sampled at every node
  Given,              ///< SolveConfig::given, boundary overwritten by the data
};

enum class Preconditioner {
  Jacobi,          ///< diagonal of the Hessian
  Spectral,        ///< constant-coefficient Laplacian with per-axis mean g''
  ScaledSpectral,  ///< Spectral, symmetrically rescaled by the Hessian diagonal
  Hessian,         ///< Hessian at the last refresh: sparse Cholesky in 2D and on
                   ///< small 3D grids, loose inner PCG otherwise
};

struct LineSearch {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 60;
};

struct SolveConfig {
  /// Stop once max |el_residual| / cell volume <= tol over interior nodes.
  /// Ten accepted steps in a row that leave the exact energy unchanged also
  /// stop the iteration, unconverged.
  double tol = 1e-8;
  long max_iters = 20000;
  LineSearch linesearch;
  InitialGuess initial = InitialGuess::Interpolation;
  std::optional<NodalField> given;
  Preconditioner preconditioner = Preconditioner::Hessian;
  /// Iterations between preconditioner refreshes (each refresh restarts the
  /// conjugate directions). With the Hessian preconditioner and refresh = 1
  /// every step is a damped Newton step.
  int refresh = 1;
  /// Mollify the boundary data with radius params.eps before sampling it.
  bool mollify_data = true;
  /// Throw ConvergenceError instead of returning an unconverged result.
  bool throw_on_failure = true;

  void validate() const;
};

struct SolveResult {
  NodalField u;
  double energy = 0.0;
  double initial_energy = 0.0;
  /// max |el_residual| / cell volume over interior nodes
  double residual_max = 0.0;
  long iterations = 0;
  bool converged = false;
  /// Energy after every accepted iteration, starting with the initial iterate.
  std::vector<double> energy_history;
};

/// Boundary data actually imposed by solve(): mollified when configured and
/// eps > 0.
BoundaryData effective_data(const ModelParams& params, const BoundaryData& data, const SolveConfig& cfg);

/// Minimizes the discrete regularized energy with boundary nodes fixed to the
/// (mollified) data, by preconditioned nonlinear conjugate gradients with an
/// exact-energy line search.
SolveResult solve(const ModelParams& params, const BoundaryData& data, const Grid& grid, const SolveConfig& cfg);

/// Max |el_residual| / cell volume over interior nodes.
double scaled_residual(const NodalField& u, const ModelParams& params);

/// Size of the scaled residual caused by rounding u to double:
/// DBL_EPSILON * max_k sum_edges g''(t_e) (|u_a| + |u_b|) / h^2. Tolerances
/// below a small multiple of it are out of reach.
double residual_floor(const NodalField& u, const ModelParams& params);

struct SweepRow {
  double eps = 0.0;
  double energy = 0.0;
  double residual_max = 0.0;
  long iterations = 0;
  /// Energy of the sampled mollified data, the competitor with the same
  /// boundary values.
  double competitor_energy = 0.0;
  /// ||u_k - u_{k+1}||_{L^{p_1}}, empty on the last row.
  std::optional<double> diff_lp1;
  /// ||D_i u_k - D_i u_{k+1}||_{L^{p_i}} per axis, empty on the last row.
  std::vector<double> diff_grad;
};

struct SweepResult {
  std::vector<SolveResult> solutions;
  std::vector<SweepRow> table;
  /// F(u_eps) <= competitor energy on every row.
  bool energy_bound_holds = true;
};

/// Solves for a strictly decreasing list of positive eps values (sharing p
/// and eps0 with `params`) and tabulates successive differences. Each solve
/// starts from the sampled data, so the energy bound is a descent invariant.
SweepResult sweep_eps(const ModelParams& params, const std::vector<double>& eps_list, const BoundaryData& data,
                      const Grid& grid, const SolveConfig& cfg);

/// CSV with columns eps,energy,residual_max,iters,diff_lp1,diff_grad_1,...
void write_sweep_csv(const SweepResult& sweep, std::ostream& os);

}  // namespace orthlip
