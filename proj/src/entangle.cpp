#include "entverify/entangle.hpp"

#include <cmath>
#include <ostream>

#include "entverify/format.hpp"

namespace entverify {

double tau(const ReferenceState& reference, double E, const Vec3& x,
           TauNormalization norm) {
  if (E == 0.0 || !std::isfinite(E)) {
    throw DomainError("E must be non-zero in the time shift");
  }
  const double amp = reference.psi_I(x);
  if (!(std::abs(amp) >= kNodeEpsilon)) {
    throw SingularityError("reference amplitude below node threshold", x);
  }
  double ln_amp = std::log(std::abs(amp));
  if (norm == TauNormalization::Drop) ln_amp -= reference.peak_log;
  return reference.hbar / E * ln_amp;
}

EntangledPoint to_entangled(const Vec3& X, const Vec3& x, double t,
                            const ReferenceState& reference, double E,
                            TauNormalization norm) {
  EntangledPoint p;
  p.Z = X;
  p.z = x;
  p.s = Complex(t, tau(reference, E, x, norm));
  p.space = EntangledPoint::Space::Forward;
  return p;
}

EntangledPoint to_conjugate(const Vec3& X, const Vec3& x, double t,
                            const ReferenceState& reference, double E,
                            TauNormalization norm) {
  EntangledPoint p;
  p.Z = X;
  p.z = x;
  p.s = Complex(t, -tau(reference, E, x, norm));
  p.space = EntangledPoint::Space::Conjugate;
  return p;
}

LabPoint from_entangled(const EntangledPoint& p,
                        const ReferenceState& reference, double E,
                        TauNormalization norm) {
  const double shift = tau(reference, E, p.z, norm);
  const Complex t_complex =
      p.space == EntangledPoint::Space::Forward
          ? p.s - Complex(0.0, 1.0) * shift
          : p.s + Complex(0.0, 1.0) * shift;
  LabPoint lab;
  lab.X = p.Z;
  lab.x = p.z;
  lab.t = t_complex.real();
  return lab;
}

Complex entangled_wavefunction(const QuantumNumbers& l,
                               const EntangledPoint& p,
                               const SystemParams& params) {
  const double alpha = params.m_r * params.omega / params.hbar;
  const int n = l.n();
  const double log_norm =
      0.75 * std::log(alpha / M_PI) -
      0.5 * (static_cast<double>(n) * std::log(2.0) +
             std::lgamma(static_cast<double>(l.l1) + 1.0) +
             std::lgamma(static_cast<double>(l.l2) + 1.0) +
             std::lgamma(static_cast<double>(l.l3) + 1.0));
  const double scale = std::sqrt(alpha);
  const double polys = hermite(l.l1, scale * p.z[0]) *
                       hermite(l.l2, scale * p.z[1]) *
                       hermite(l.l3, scale * p.z[2]);
  const double E = energy_of(n, params);
  const Complex phase =
      std::exp(Complex(0.0, -1.0) * E * p.s / params.hbar);
  return std::exp(log_norm) * polys * phase;
}

RatioStats consistency_ratio(const QuantumNumbers& l, const Grid& grid,
                             double t, const SystemParams& params,
                             TauNormalization norm) {
  const ReferenceState ref =
      grid.dim == 3 ? ground_state(params) : ground_state_1d(params);
  const StateSpec state = grid.dim == 3 ? eigenstate(l, params)
                                        : eigenstate_1d(l.l1, params);
  const double E = state.energy;
  const Complex lab_phase =
      std::exp(Complex(0.0, -1.0) * E * t / params.hbar);

  // Exclude points near nodes of the lab-frame eigenfunction, where the
  // ratio is 0/0.
  std::vector<Complex> ratios;
  double peak = 0.0;
  std::vector<std::pair<Vec3, Complex>> dens;
  auto visit = [&](const Vec3& x) {
    const Complex den = state.psi(x) * lab_phase;
    peak = std::max(peak, std::abs(den));
    dens.emplace_back(x, den);
  };
  if (grid.dim == 1) {
    for (int i = 0; i < grid.points; ++i) visit({grid.axis[i], 0, 0});
  } else {
    for (int i = 0; i < grid.points; ++i)
      for (int j = 0; j < grid.points; ++j)
        for (int k = 0; k < grid.points; ++k)
          visit({grid.axis[i], grid.axis[j], grid.axis[k]});
  }
  const double floor = 1e-6 * peak;
  Complex sum{};
  for (const auto& [x, den] : dens) {
    if (std::abs(den) < floor) continue;
    const EntangledPoint p = to_entangled({0, 0, 0}, x, t, ref, E, norm);
    ratios.push_back(entangled_wavefunction(l, p, params) / den);
  }
  RatioStats stats;
  stats.count = ratios.size();
  if (ratios.empty()) return stats;
  for (const Complex& r : ratios) sum += r;
  stats.mean = sum / static_cast<double>(ratios.size());
  double dev2 = 0.0;
  for (const Complex& r : ratios) dev2 += std::norm(r - stats.mean);
  stats.rel_spread = std::sqrt(dev2 / static_cast<double>(ratios.size())) /
                     std::abs(stats.mean);
  return stats;
}

void write_tau_field_csv(std::ostream& os, const ReferenceState& reference,
                         double E, const Grid& grid, TauNormalization norm) {
  // rows are limited to the node-free domain where the shift is defined
  if (grid.dim == 1) {
    os << "x,psi_ref,tau\n";
    for (int i = 0; i < grid.points; ++i) {
      const Vec3 x{grid.axis[static_cast<std::size_t>(i)], 0, 0};
      if (std::abs(reference.psi_I(x)) < kNodeEpsilon) continue;
      os << format_double(x[0]) << ',' << format_double(reference.psi_I(x))
         << ',' << format_double(tau(reference, E, x, norm)) << '\n';
    }
    return;
  }
  os << "x,y,z,psi_ref,tau\n";
  for (int i = 0; i < grid.points; ++i) {
    for (int j = 0; j < grid.points; ++j) {
      for (int k = 0; k < grid.points; ++k) {
        const Vec3 x{grid.axis[static_cast<std::size_t>(i)],
                     grid.axis[static_cast<std::size_t>(j)],
                     grid.axis[static_cast<std::size_t>(k)]};
        if (std::abs(reference.psi_I(x)) < kNodeEpsilon) continue;
        os << format_double(x[0]) << ',' << format_double(x[1]) << ','
           << format_double(x[2]) << ',' << format_double(reference.psi_I(x))
           << ',' << format_double(tau(reference, E, x, norm)) << '\n';
      }
    }
  }
}

}  // namespace entverify
