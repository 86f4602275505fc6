// oscillator.hpp — closed-form 3D isotropic harmonic oscillator eigenstates
// in Cartesian product form, their energies, and the nodeless ground state
// used as the default reference.

#pragma once

#include <array>
#include <functional>
#include <string>

#include "entverify/core.hpp"
#include "entverify/reference.hpp"

namespace entverify {

// Degrees above this overflow unnormalized Hermite values in double range.
inline constexpr int kMaxHermiteDegree = 40;

// Physicists' Hermite polynomial H_l via the recurrence
// H_{l+1} = 2 xi H_l - 2 l H_{l-1}.
double hermite(int l, double xi);

// E_n = hbar omega (3/2 + n). The half-integer is exact in binary floating
// point, so the result is exact for integer-valued hbar*omega.
double energy_of(int n, const SystemParams& params);

// Single-axis level: hbar omega (1/2 + l).
double energy_of_1d(int l, const SystemParams& params);

// An internal stationary state with a pointwise evaluator. States built by
// this library are real separable products; axis_factor exposes the per-axis
// factors so large-grid checks can stream instead of materializing fields.
struct StateSpec {
  QuantumNumbers qn{};
  double energy = 0.0;
  int dim = 3;
  std::string label;
  std::function<Complex(const Vec3&)> psi;
  std::array<AxisFn, 3> axis_factor{};

  bool separable() const {
    for (int a = 0; a < dim; ++a) {
      if (!axis_factor[a]) return false;
    }
    return true;
  }
};

// Normalized product eigenstate
//   Psi(x) = (m_r w/pi hbar)^{3/4} (2^n l1! l2! l3!)^{-1/2}
//            H_{l1}(xi_1) H_{l2}(xi_2) H_{l3}(xi_3) exp(-m_r w r^2 / 2 hbar)
// with xi_j = sqrt(m_r w/hbar) x_j. Normalization constants are assembled in
// log space so degrees up to kMaxHermiteDegree stay finite.
StateSpec eigenstate(const QuantumNumbers& l, const SystemParams& params);

// Single-axis eigenstate psi_l(x), normalized on the line.
StateSpec eigenstate_1d(int l, const SystemParams& params);

// Gaussian ground state as the reference: E_m = (3/2) hbar omega and
// log-derivative L_i(x) = -(m_r w/hbar) x_i in closed form.
ReferenceState ground_state(const SystemParams& params);

// 1D variant (E_m = hbar omega / 2), used by degenerate-grid checks.
ReferenceState ground_state_1d(const SystemParams& params);

}  // namespace entverify
