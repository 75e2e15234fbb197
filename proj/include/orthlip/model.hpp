#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "orthlip/exponents.hpp"
#include "orthlip/grid.hpp"

namespace orthlip {

/// Exponents plus the regularization weight eps of
///   g_{i,eps}(t) = |t|^{p_i}/p_i + (eps/2) t^2.
struct ModelParams {
  ExponentVector p;
  double eps = 0.0;
  double eps0 = 0.5;

  ModelParams(ExponentVector p_, double eps_, double eps0_ = 0.5);
};

/// Fast evaluation of g, g', g'' for one axis. Integer exponents avoid pow().
class AxisIntegrand {
 public:
  AxisIntegrand(double p, double eps);

  double p() const noexcept { return p_; }
  /// |t|^{p-2}
  double weight(double t) const noexcept {
    const double a = std::abs(t);
    switch (int_exp_) {
      case 0: return 1.0;
      case 1: return a;
      case 2: return a * a;
      case 3: return a * a * a;
      case 4: { const double a2 = a * a; return a2 * a2; }
      case 6: { const double a2 = a * a; return a2 * a2 * a2; }
      case 8: { const double a2 = a * a, a4 = a2 * a2; return a4 * a4; }
      default: return std::pow(a, p_ - 2.0);
    }
  }
  double value(double t) const noexcept { return (weight(t) / p_ + 0.5 * eps_) * t * t; }
  double first(double t) const noexcept { return (weight(t) + eps_) * t; }
  double second(double t) const noexcept { return (p_ - 1.0) * weight(t) + eps_; }

 private:
  double p_;
  double eps_;
  int int_exp_;  // p - 2 when it is a small integer, -1 otherwise
};

/// i is the zero-based axis.
double g_eval(std::size_t i, double t, const ModelParams& params);
double g_first(std::size_t i, double t, const ModelParams& params);
double g_second(std::size_t i, double t, const ModelParams& params);

/// Discrete energy sum_i int g_{i,eps}(u_{x_i}) over the cells whose center
/// lies in the region. Each cell uses the mean of g over its edges parallel to
/// axis i of the one-sided difference along that edge.
double energy(const NodalField& u, const ModelParams& params, const SubRegion& region);
/// Whole-domain energy, summed edge by edge.
double energy(const NodalField& u, const ModelParams& params);

/// Gradient of the whole-domain discrete energy with respect to each interior
/// nodal value (weak-form residual). Boundary entries are zero.
NodalField el_residual(const NodalField& u, const ModelParams& params);

/// Boundary/extension data U. Evaluable everywhere in R^N.
class BoundaryData {
 public:
  enum class Kind { Affine, Trigonometric, RandomSmooth, Tabulated };

  /// amplitude * sin(wave . x + phase)
  struct Mode {
    std::vector<double> wave;
    double amplitude = 0.0;
    double phase = 0.0;
  };

  static BoundaryData affine(std::vector<double> slope, double offset);
  static BoundaryData trigonometric(std::size_t dim, std::vector<Mode> modes, double offset = 0.0);
  /// Deterministic sum of `modes` random sine modes with integer-multiple-of-pi
  /// wave numbers up to max_frequency, seeded explicitly.
  static BoundaryData random_smooth(std::size_t dim, std::uint64_t seed, int modes = 6,
                                    int max_frequency = 3, double amplitude = 1.0);
  /// Values on a sampling lattice, multilinearly interpolated and extended by
  /// clamping outside the lattice.
  static BoundaryData tabulated(Grid sampling, std::vector<double> values);

  /// Parses the structured-text key list produced by to_keys(). Tabulated
  /// data reads its samples from the CSV file named by the "values" key.
  static BoundaryData from_keys(const std::map<std::string, std::string>& keys,
                                const std::string& base_dir = ".");
  /// Tabulated samples are referenced by `values_path`; write them with
  /// write_field_csv(tabulated_field()).
  std::map<std::string, std::string> to_keys(const std::string& values_path = "tabulated.csv") const;
  /// Samples of tabulated data as a field on its sampling lattice.
  NodalField tabulated_field() const;

  Kind kind() const noexcept { return kind_; }
  std::string kind_name() const;
  std::size_t dim() const noexcept { return dim_; }
  double operator()(const Point& x) const;
  /// Upper bound for |U| over the closed box of the grid.
  double linf_bound(const Grid& domain) const;
  /// Radius of the mollifier already applied (0 for raw data).
  double mollifier_radius() const noexcept { return mollified_; }

  const std::vector<double>& slope() const noexcept { return slope_; }
  double offset() const noexcept { return offset_; }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  const Grid* sampling() const noexcept { return sampling_.get(); }
  const std::vector<double>& samples() const noexcept { return samples_; }

 private:
  friend BoundaryData mollify(const BoundaryData&, double);
  Kind kind_ = Kind::Affine;
  std::size_t dim_ = 2;
  std::vector<double> slope_;
  double offset_ = 0.0;
  std::vector<Mode> modes_;
  std::vector<double> multiplier_;  // per-mode Fourier factor of the mollifier
  std::uint64_t seed_ = 0;
  int random_modes_ = 0;
  int max_frequency_ = 0;
  double random_amplitude_ = 0.0;
  std::shared_ptr<const Grid> sampling_;
  std::vector<double> samples_;
  double mollified_ = 0.0;
};

/// Unnormalized mollifier profile (1 - |x|^2)^2 on the unit ball.
double mollifier_profile(double r) noexcept;

/// Fourier factor int rho_1(y) cos(k y_1) dy of the unit-mass mollifier in
/// `dim` dimensions.
double mollifier_fourier(std::size_t dim, double k);

/// Convolution with the unit-mass mollifier of radius eps. Affine data is
/// returned unchanged; trigonometric data picks up exact per-mode factors;
/// tabulated data is convolved by quadrature on its sampling nodes.
BoundaryData mollify(const BoundaryData& data, double eps);

/// Nodal interpolant of the data on every node of the grid.
NodalField sample(const BoundaryData& data, const Grid& grid);

}  // namespace orthlip
