#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace gfft {

/// Time-dependent coefficient function on [0,T] with an analytic derivative.
/// Families: zero, linear (c*t), poly (sum c_k t^k), exp (alpha*(e^{beta t}-1)),
/// power (c*t^p). All families vanish at t=0 so they can serve as drift or
/// variance functions directly.
class ScalarFunction {
 public:
  ScalarFunction() : family_(Family::Zero) {}

  static ScalarFunction zero();
  static ScalarFunction linear(double c);
  static ScalarFunction polynomial(std::vector<double> coeffs);  // coeffs[k] * t^k
  static ScalarFunction exponential(double alpha, double beta);  // alpha*(e^{beta t}-1)
  static ScalarFunction power(double c, double p);               // c * t^p

  /// Builds from a family name and parameter list, as read from config files.
  static ScalarFunction from_family(const std::string& family, std::span<const double> params);

  double value(double t) const;
  double deriv(double t) const;

  std::string describe() const;

 private:
  enum class Family { Zero, Linear, Poly, Exp, Power };
  Family family_;
  std::vector<double> params_;
};

struct DriftSpec {
  ScalarFunction a;  // mean displacement, a(0) = 0
};

struct VarianceSpec {
  ScalarFunction b;  // strictly increasing, b(0) = 0
  double horizon = 1.0;
};

/// Uniform grid 0 = t_0 < ... < t_N = T with N even (composite Simpson).
struct TimeGrid {
  TimeGrid(int n, double horizon);
  int n;
  double horizon;
  double step;
  std::vector<double> nodes;
};

/// The pair (a, b) together with the grid and every precomputed table the
/// rest of the library needs. Immutable after construction; shared by value
/// through ConfigPtr.
class SpaceConfig {
 public:
  SpaceConfig(DriftSpec drift, VarianceSpec variance, TimeGrid grid);

  static std::shared_ptr<const SpaceConfig> create(DriftSpec drift, VarianceSpec variance,
                                                   TimeGrid grid);

  const TimeGrid& grid() const { return grid_; }
  const DriftSpec& drift() const { return drift_; }
  const VarianceSpec& variance() const { return variance_; }
  double horizon() const { return grid_.horizon; }
  int n() const { return grid_.n; }

  std::span<const double> nodes() const { return grid_.nodes; }
  std::span<const double> bprime() const { return bprime_; }
  std::span<const double> aprime() const { return aprime_; }
  std::span<const double> b_values() const { return b_values_; }
  std::span<const double> a_values() const { return a_values_; }

  /// Exact node increments b(t_{j+1}) - b(t_j) and a(t_{j+1}) - a(t_j),
  /// j = 0..N-1. These define the discrete path law; see path_sampler.
  std::span<const double> db_cells() const { return db_cells_; }
  std::span<const double> da_cells() const { return da_cells_; }

  /// Density of the drift as a Cameron-Martin element: a'(t)/b'(t) at nodes.
  std::span<const double> drift_density() const { return drift_density_; }

  /// Prefix integrals int_0^{t_m} f dt for node samples of f, m = 0..N.
  /// Even prefixes are composite Simpson; odd prefixes add a three-point
  /// end-cell correction (exact on quadratics).
  void cumulative_integral(std::span<const double> f, std::span<double> out) const;
  double prefix_integral(std::span<const double> f, int m) const;

  /// Nearest grid node to t; throws if t is outside [0,T].
  int snap(double t) const;

  bool bprime_positive() const { return bprime_positive_; }

 private:
  DriftSpec drift_;
  VarianceSpec variance_;
  TimeGrid grid_;
  std::vector<double> bprime_, aprime_, b_values_, a_values_;
  std::vector<double> db_cells_, da_cells_, drift_density_;
  bool bprime_positive_ = true;
};

using ConfigPtr = std::shared_ptr<const SpaceConfig>;

/// Composite Simpson over the whole grid from node samples.
/// Throws std::domain_error naming the node on non-finite input.
double quadrature(std::span<const double> f, const SpaceConfig& cfg);
std::complex<double> quadrature(std::span<const std::complex<double>> f, const SpaceConfig& cfg);
std::complex<double> quadrature(const std::function<std::complex<double>(double)>& f,
                                const SpaceConfig& cfg);

/// Composite Simpson of a callable on its own grid (used by validation
/// refinement checks). Non-finite values propagate, they do not throw.
double simpson_callable(const std::function<double(double)>& f, double horizon, int n);

/// Weighted inner product int_0^T u v d[b + |a|] = int u v (b' + |a'|) dt.
double inner_ab(const std::function<double(double)>& u, const std::function<double(double)>& v,
                const SpaceConfig& cfg);
double inner_ab(std::span<const double> u, std::span<const double> v, const SpaceConfig& cfg);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass = false;
};

/// Finiteness check for one improper integral: fails on a non-finite node
/// value or when one grid refinement grows the quadrature by more than 2x.
ValidationCheck divergence_check(const std::string& name,
                                 const std::function<double(double)>& f, double horizon, int n);

/// Checks the standing hypotheses on (a, b): a(0)=0, b(0)=0, b' bounded away
/// from 0 and finite on the grid, int a'^2 dt and int |a'|^3 dt finite.
/// Divergent integrals are flagged either by a non-finite quadrature value or
/// by the value growing more than 2x under one grid refinement.
ValidationReport validate_config(const SpaceConfig& cfg);

}  // namespace gfft
