#include "entverify/oscillator.hpp"

#include <cmath>

namespace entverify {

double hermite(int l, double xi) {
  if (l < 0 || l > kMaxHermiteDegree) {
    throw DomainError("hermite degree out of range [0, 40]");
  }
  double h0 = 1.0;
  if (l == 0) return h0;
  double h1 = 2.0 * xi;
  for (int k = 1; k < l; ++k) {
    const double h2 = 2.0 * xi * h1 - 2.0 * static_cast<double>(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double energy_of(int n, const SystemParams& params) {
  if (n < 0) throw DomainError("n must be non-negative");
  return 0.5 * params.hbar * params.omega * static_cast<double>(2 * n + 3);
}

double energy_of_1d(int l, const SystemParams& params) {
  if (l < 0) throw DomainError("l must be non-negative");
  return 0.5 * params.hbar * params.omega * static_cast<double>(2 * l + 1);
}

namespace {

// ln of the 1D normalization (m_r w/pi hbar)^{1/4} (2^l l!)^{-1/2}.
double log_norm_1d(int l, const SystemParams& p) {
  const double alpha = p.m_r * p.omega / p.hbar;
  return 0.25 * std::log(alpha / M_PI) -
         0.5 * (static_cast<double>(l) * std::log(2.0) +
                std::lgamma(static_cast<double>(l) + 1.0));
}

AxisFn axis_eigenfunction(int l, const SystemParams& p) {
  const double alpha = p.m_r * p.omega / p.hbar;
  const double scale = std::sqrt(alpha);
  const double norm = std::exp(log_norm_1d(l, p));
  return [l, scale, norm](double x) {
    const double xi = scale * x;
    return norm * hermite(l, xi) * std::exp(-0.5 * xi * xi);
  };
}

}  // namespace

StateSpec eigenstate(const QuantumNumbers& l, const SystemParams& params) {
  if (l.l1 < 0 || l.l2 < 0 || l.l3 < 0) {
    throw DomainError("quantum numbers must be non-negative");
  }
  if (l.l1 > kMaxHermiteDegree || l.l2 > kMaxHermiteDegree ||
      l.l3 > kMaxHermiteDegree) {
    throw DomainError("hermite degree out of range [0, 40]");
  }
  StateSpec s;
  s.qn = l;
  s.energy = energy_of(l.n(), params);
  s.dim = 3;
  s.label = "oscillator(" + std::to_string(l.l1) + "," + std::to_string(l.l2) +
            "," + std::to_string(l.l3) + ")";
  s.axis_factor = {axis_eigenfunction(l.l1, params),
                   axis_eigenfunction(l.l2, params),
                   axis_eigenfunction(l.l3, params)};
  auto f = s.axis_factor;
  s.psi = [f](const Vec3& x) {
    return Complex(f[0](x[0]) * f[1](x[1]) * f[2](x[2]), 0.0);
  };
  return s;
}

StateSpec eigenstate_1d(int l, const SystemParams& params) {
  if (l < 0 || l > kMaxHermiteDegree) {
    throw DomainError("hermite degree out of range [0, 40]");
  }
  StateSpec s;
  s.qn = QuantumNumbers{l, 0, 0};
  s.energy = energy_of_1d(l, params);
  s.dim = 1;
  s.label = "oscillator1d(" + std::to_string(l) + ")";
  s.axis_factor[0] = axis_eigenfunction(l, params);
  auto f = s.axis_factor[0];
  s.psi = [f](const Vec3& x) { return Complex(f(x[0]), 0.0); };
  return s;
}

namespace {

ReferenceState gaussian_reference(const SystemParams& p, int dim) {
  const double alpha = p.m_r * p.omega / p.hbar;
  const double log_pref = static_cast<double>(dim) * 0.25 * std::log(alpha / M_PI);
  ReferenceState r;
  r.dim = dim;
  r.hbar = p.hbar;
  r.source = ReferenceState::Source::ClosedForm;
  r.label = dim == 3 ? "oscillator-ground" : "oscillator-ground-1d";
  r.energy_m = 0.5 * p.hbar * p.omega * static_cast<double>(dim);
  r.peak_log = log_pref;
  r.psi_I = [log_pref, alpha, dim](const Vec3& x) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    return std::exp(log_pref - 0.5 * alpha * r2);
  };
  r.log_derivative = [alpha, dim](const Vec3& x) {
    Vec3 L{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) L[a] = -alpha * x[a];
    return L;
  };
  const double axis_pref = 0.25 * std::log(alpha / M_PI);
  for (int a = 0; a < dim; ++a) {
    r.axis_log[a] = [axis_pref, alpha](double x) {
      return axis_pref - 0.5 * alpha * x * x;
    };
    r.axis_log_derivative[a] = [alpha](double x) { return -alpha * x; };
  }
  return r;
}

}  // namespace

ReferenceState ground_state(const SystemParams& params) {
  return gaussian_reference(params, 3);
}

ReferenceState ground_state_1d(const SystemParams& params) {
  return gaussian_reference(params, 1);
}

}  // namespace entverify
