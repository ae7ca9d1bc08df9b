#include "gfft/time_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gfft {

ScalarFunction ScalarFunction::zero() { return ScalarFunction(); }

ScalarFunction ScalarFunction::linear(double c) {
  ScalarFunction f;
  f.family_ = Family::Linear;
  f.params_ = {c};
  return f;
}

ScalarFunction ScalarFunction::polynomial(std::vector<double> coeffs) {
  ScalarFunction f;
  f.family_ = Family::Poly;
  f.params_ = std::move(coeffs);
  return f;
}

ScalarFunction ScalarFunction::exponential(double alpha, double beta) {
  ScalarFunction f;
  f.family_ = Family::Exp;
  f.params_ = {alpha, beta};
  return f;
}

ScalarFunction ScalarFunction::power(double c, double p) {
  ScalarFunction f;
  f.family_ = Family::Power;
  f.params_ = {c, p};
  return f;
}

ScalarFunction ScalarFunction::from_family(const std::string& family,
                                           std::span<const double> params) {
  std::vector<double> p(params.begin(), params.end());
  if (family == "zero") return zero();
  if (family == "linear") {
    if (p.size() != 1) throw std::invalid_argument("linear family takes one parameter");
    return linear(p[0]);
  }
  if (family == "poly") return polynomial(std::move(p));
  if (family == "exp") {
    if (p.size() != 2) throw std::invalid_argument("exp family takes two parameters");
    return exponential(p[0], p[1]);
  }
  if (family == "power") {
    if (p.size() != 2) throw std::invalid_argument("power family takes two parameters");
    return power(p[0], p[1]);
  }
  throw std::invalid_argument("unknown function family: " + family);
}

double ScalarFunction::value(double t) const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Linear:
      return params_[0] * t;
    case Family::Poly: {
      double acc = 0.0;
      for (std::size_t k = params_.size(); k-- > 0;) acc = acc * t + params_[k];
      return acc;
    }
    case Family::Exp:
      return params_[0] * (std::exp(params_[1] * t) - 1.0);
    case Family::Power:
      return params_[0] * std::pow(t, params_[1]);
  }
  return 0.0;
}

double ScalarFunction::deriv(double t) const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Linear:
      return params_[0];
    case Family::Poly: {
      double acc = 0.0;
      for (std::size_t k = params_.size(); k-- > 1;)
        acc = acc * t + static_cast<double>(k) * params_[k];
      return acc;
    }
    case Family::Exp:
      return params_[0] * params_[1] * std::exp(params_[1] * t);
    case Family::Power:
      return params_[0] * params_[1] * std::pow(t, params_[1] - 1.0);
  }
  return 0.0;
}

std::string ScalarFunction::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Zero:
      os << "zero";
      break;
    case Family::Linear:
      os << "linear(" << params_[0] << ")";
      break;
    case Family::Poly: {
      os << "poly(";
      for (std::size_t k = 0; k < params_.size(); ++k) os << (k ? " " : "") << params_[k];
      os << ")";
      break;
    }
    case Family::Exp:
      os << "exp(" << params_[0] << "," << params_[1] << ")";
      break;
    case Family::Power:
      os << "power(" << params_[0] << "," << params_[1] << ")";
      break;
  }
  return os.str();
}

TimeGrid::TimeGrid(int n_, double horizon_) : n(n_), horizon(horizon_) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("grid size must be even and >= 2");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  step = horizon / n;
  nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) nodes[i] = horizon * static_cast<double>(i) / n;
}

SpaceConfig::SpaceConfig(DriftSpec drift, VarianceSpec variance, TimeGrid grid)
    : drift_(std::move(drift)), variance_(std::move(variance)), grid_(std::move(grid)) {
  if (std::abs(variance_.horizon - grid_.horizon) > 1e-12 * std::max(1.0, grid_.horizon))
    throw std::invalid_argument("SpaceConfig: grid horizon differs from the variance horizon");
  const int n = grid_.n;
  bprime_.resize(n + 1);
  aprime_.resize(n + 1);
  b_values_.resize(n + 1);
  a_values_.resize(n + 1);
  drift_density_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = grid_.nodes[i];
    bprime_[i] = variance_.b.deriv(t);
    aprime_[i] = drift_.a.deriv(t);
    b_values_[i] = variance_.b.value(t);
    a_values_[i] = drift_.a.value(t);
    if (!(bprime_[i] > 0.0)) bprime_positive_ = false;
    drift_density_[i] = bprime_[i] != 0.0 ? aprime_[i] / bprime_[i] : 0.0;
  }
  db_cells_.resize(n);
  da_cells_.resize(n);
  for (int j = 0; j < n; ++j) {
    db_cells_[j] = b_values_[j + 1] - b_values_[j];
    da_cells_[j] = a_values_[j + 1] - a_values_[j];
  }
}

std::shared_ptr<const SpaceConfig> SpaceConfig::create(DriftSpec drift, VarianceSpec variance,
                                                       TimeGrid grid) {
  return std::make_shared<const SpaceConfig>(std::move(drift), std::move(variance),
                                             std::move(grid));
}

void SpaceConfig::cumulative_integral(std::span<const double> f, std::span<double> out) const {
  const int n = grid_.n;
  if (static_cast<int>(f.size()) != n + 1 || static_cast<int>(out.size()) != n + 1)
    throw std::invalid_argument("cumulative_integral: size mismatch with grid");
  const double h = grid_.step;
  out[0] = 0.0;
  for (int m = 2; m <= n; m += 2)
    out[m] = out[m - 2] + h / 3.0 * (f[m - 2] + 4.0 * f[m - 1] + f[m]);
  if (n >= 2) out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  for (int m = 3; m <= n; m += 2)
    out[m] = out[m - 1] + h / 12.0 * (-f[m - 2] + 8.0 * f[m - 1] + 5.0 * f[m]);
}

double SpaceConfig::prefix_integral(std::span<const double> f, int m) const {
  const int n = grid_.n;
  if (m < 0 || m > n) throw std::invalid_argument("prefix_integral: node out of range");
  const double h = grid_.step;
  double acc = 0.0;
  const int even_end = m - (m % 2);
  for (int k = 2; k <= even_end; k += 2) acc += h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
  if (m % 2 == 1) {
    if (m == 1)
      acc = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    else
      acc += h / 12.0 * (-f[m - 2] + 8.0 * f[m - 1] + 5.0 * f[m]);
  }
  return acc;
}

int SpaceConfig::snap(double t) const {
  const double tol = 1e-9 * std::max(1.0, grid_.horizon);
  if (t < -tol || t > grid_.horizon + tol)
    throw std::out_of_range("time outside [0,T]");
  int i = static_cast<int>(std::lround(t / grid_.step));
  return std::clamp(i, 0, grid_.n);
}

namespace {

template <typename T>
T simpson_nodes(std::span<const T> f, int n, double h) {
  T acc{};
  for (int k = 2; k <= n; k += 2) acc += f[k - 2] + 4.0 * f[k - 1] + f[k];
  return acc * (h / 3.0);
}

void require_finite(std::span<const double> f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i]))
      throw std::domain_error("non-finite integrand value at node " + std::to_string(i));
}

}  // namespace

double quadrature(std::span<const double> f, const SpaceConfig& cfg) {
  if (static_cast<int>(f.size()) != cfg.n() + 1)
    throw std::invalid_argument("quadrature: size mismatch with grid");
  require_finite(f);
  return simpson_nodes(f, cfg.n(), cfg.grid().step);
}

std::complex<double> quadrature(std::span<const std::complex<double>> f, const SpaceConfig& cfg) {
  if (static_cast<int>(f.size()) != cfg.n() + 1)
    throw std::invalid_argument("quadrature: size mismatch with grid");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag()))
      throw std::domain_error("non-finite integrand value at node " + std::to_string(i));
  return simpson_nodes(f, cfg.n(), cfg.grid().step);
}

std::complex<double> quadrature(const std::function<std::complex<double>(double)>& f,
                                const SpaceConfig& cfg) {
  std::vector<std::complex<double>> v(cfg.n() + 1);
  for (int i = 0; i <= cfg.n(); ++i) v[i] = f(cfg.nodes()[i]);
  return quadrature(std::span<const std::complex<double>>(v), cfg);
}

double simpson_callable(const std::function<double(double)>& f, double horizon, int n) {
  const double h = horizon / n;
  double acc = 0.0;
  for (int k = 2; k <= n; k += 2) {
    acc += f((k - 2) * h) + 4.0 * f((k - 1) * h) + f(k * h);
  }
  return acc * (h / 3.0);
}

double inner_ab(const std::function<double(double)>& u, const std::function<double(double)>& v,
                const SpaceConfig& cfg) {
  std::vector<double> f(cfg.n() + 1);
  for (int i = 0; i <= cfg.n(); ++i) {
    const double t = cfg.nodes()[i];
    f[i] = u(t) * v(t) * (cfg.bprime()[i] + std::abs(cfg.aprime()[i]));
  }
  return quadrature(std::span<const double>(f), cfg);
}

double inner_ab(std::span<const double> u, std::span<const double> v, const SpaceConfig& cfg) {
  if (u.size() != v.size() || static_cast<int>(u.size()) != cfg.n() + 1)
    throw std::invalid_argument("inner_ab: size mismatch with grid");
  std::vector<double> f(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    f[i] = u[i] * v[i] * (cfg.bprime()[i] + std::abs(cfg.aprime()[i]));
  return quadrature(std::span<const double>(f), cfg);
}

ValidationCheck divergence_check(const std::string& name, const std::function<double(double)>& f,
                                 double horizon, int n) {
  ValidationCheck c;
  c.name = name;
  bool finite = true;
  for (int i = 0; i <= n; ++i) {
    if (!std::isfinite(f(horizon * static_cast<double>(i) / n))) {
      finite = false;
      c.note = "non-finite value at node " + std::to_string(i);
      break;
    }
  }
  if (!finite) {
    c.pass = false;
    c.measured = std::numeric_limits<double>::infinity();
    return c;
  }
  const double coarse = simpson_callable(f, horizon, n);
  const double fine = simpson_callable(f, horizon, 2 * n);
  c.measured = fine;
  if (!std::isfinite(fine) || !std::isfinite(coarse)) {
    c.pass = false;
    c.note = "non-finite quadrature value";
  } else if (std::abs(fine) > 2.0 * std::abs(coarse) && std::abs(coarse) > 1e-300) {
    c.pass = false;
    std::ostringstream os;
    os << "quadrature grows under refinement: " << coarse << " -> " << fine;
    c.note = os.str();
  } else {
    c.pass = true;
  }
  return c;
}

ValidationReport validate_config(const SpaceConfig& cfg) {
  ValidationReport rep;
  const auto& a = cfg.drift().a;
  const auto& b = cfg.variance().b;
  const double T = cfg.horizon();
  const int n = cfg.n();

  {
    ValidationCheck c;
    c.name = "a(0) = 0";
    c.measured = a.value(0.0);
    c.pass = std::isfinite(c.measured) && std::abs(c.measured) <= 1e-12;
    rep.checks.push_back(c);
  }
  {
    ValidationCheck c;
    c.name = "b(0) = 0";
    c.measured = b.value(0.0);
    c.pass = std::isfinite(c.measured) && std::abs(c.measured) <= 1e-12;
    rep.checks.push_back(c);
  }
  {
    ValidationCheck c;
    c.name = "b' > 0 on grid";
    double mn = std::numeric_limits<double>::infinity();
    int bad = -1;
    for (int i = 0; i <= n; ++i) {
      const double v = cfg.bprime()[i];
      if (!std::isfinite(v)) {
        bad = i;
        break;
      }
      mn = std::min(mn, v);
    }
    if (bad >= 0) {
      c.pass = false;
      c.note = "non-finite value at node " + std::to_string(bad);
      c.measured = std::numeric_limits<double>::quiet_NaN();
    } else {
      c.measured = mn;
      c.pass = mn > 0.0;
    }
    rep.checks.push_back(c);
  }
  {
    ValidationCheck c;
    c.name = "b' bounded on grid";
    double mx = 0.0;
    bool ok = true;
    for (int i = 0; i <= n; ++i) {
      const double v = cfg.bprime()[i];
      if (!std::isfinite(v)) {
        ok = false;
        c.note = "non-finite value at node " + std::to_string(i);
        break;
      }
      mx = std::max(mx, std::abs(v));
    }
    c.measured = mx;
    c.pass = ok;
    rep.checks.push_back(c);
  }
  rep.checks.push_back(divergence_check(
      "int a'^2 dt finite", [&a](double t) { return a.deriv(t) * a.deriv(t); }, T, n));
  rep.checks.push_back(divergence_check(
      "int |a'|^3 dt finite",
      [&a](double t) {
        const double d = std::abs(a.deriv(t));
        return d * d * d;
      },
      T, n));

  rep.all_pass = true;
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace gfft
