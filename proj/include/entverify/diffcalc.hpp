// diffcalc.hpp — finite-difference calculus on sampled fields: the entangled
// derivative operators, the mixed second derivative, oscillator ladder
// algebra and holomorphy (Cauchy-Riemann) residuals.

#pragma once

#include <functional>
#include <optional>

#include "entverify/core.hpp"
#include "entverify/oscillator.hpp"
#include "entverify/reference.hpp"
#include "entverify/report.hpp"

namespace entverify {

// Stencil selection for a single derivative pass.
struct StencilSpec {
  int order = 4;      // accuracy order, 2 or 4
  int axis = 0;       // 0..2
  int derivative = 1; // 1 or 2
};

// Derivative of a sampled field along one axis. The output margin grows by
// order/2 per side and the margin layers are NaN sentinels, which interior
// norms skip.
ComplexField fd_derivative(const ComplexField& field, const StencilSpec& spec);

// d/dz_i acting on a stationary state: (d/dx_i - L_i) Psi with
// L_i = d ln Psi'/dx_i. For the oscillator ground reference this is
// (d/dx_i + (m_r w/hbar) x_i) Psi, the scaled lowering operator.
//
// When energy_route is set, the time derivative reduction is evaluated with
// the explicit (hbar/E)(E/hbar) factor chain instead of cancelling it
// algebraically; stationary states make the result independent of E, which
// the equivalence checks exercise.
ComplexField d_dz(const StateSpec& state, const ReferenceState& reference,
                  int axis, const Grid& grid, int order = 4,
                  std::optional<double> energy_route = std::nullopt);

// d/dz_i* acting on a stationary state: (d/dx_i + L_i) Psi.
ComplexField d_dz_conj(const StateSpec& state, const ReferenceState& reference,
                       int axis, const Grid& grid, int order = 4,
                       std::optional<double> energy_route = std::nullopt);

// Routes for the mixed second derivative sum_i d^2/dz_i* dz_i:
//   Composition — d/dz_i* applied to d/dz_i Psi, summed over axes;
//   Identity    — sum_i [d^2 Psi/dx_i^2 - (Psi/Psi') d^2 Psi'/dx_i^2].
enum class MixedRoute { Composition, Identity };

struct MixedSecondResult {
  ComplexField field;          // requested route
  double route_discrepancy;    // max |composition - identity| over interior
};

// Both routes are evaluated; `route` selects which field is returned while
// the other serves as a cross-check.
MixedSecondResult mixed_second(const StateSpec& state,
                               const ReferenceState& reference,
                               const Grid& grid, int order = 4,
                               MixedRoute route = MixedRoute::Composition);

// Max |composition - identity| over the interior. Product inputs stream
// through per-axis tables, so large grids need no 3D fields.
double mixed_route_discrepancy(const StateSpec& state,
                               const ReferenceState& reference,
                               const Grid& grid, int order = 4);

// Ladder operator application: a_i = sqrt(hbar/2 m_r w) d/dz_i lowers,
// a_i^dag = -sqrt(hbar/2 m_r w) d/dz_i* raises. Returns the resulting field,
// its projection coefficient on the expected neighbour eigenstate and the
// RMS of the orthogonal remainder (normalized by the state RMS). Lowering
// an axis with l_i = 0 returns coefficient 0 and a numerically null field.
enum class LadderDirection { Lower, Raise };

struct LadderResult {
  ComplexField field;
  double coefficient = 0.0;
  double orthogonal_residual = 0.0;
  QuantumNumbers target{};
  bool annihilated = false;
};

LadderResult ladder_apply(const StateSpec& state,
                          const ReferenceState& reference, int axis,
                          LadderDirection direction,
                          const SystemParams& params, const Grid& grid,
                          int order = 4);

// (sum_i a_i^dag a_i + 3/2) hbar w applied to the state; reports the
// best-fit scalar multiple of the state (the energy read off the operator)
// and the normalized RMS of the orthogonal remainder. Product states are
// reduced per axis without materializing 3D fields.
struct NumberOpResult {
  double lhs_energy = 0.0;
  double residual = 0.0;
};

NumberOpResult number_operator_check(const StateSpec& state,
                                     const ReferenceState& reference,
                                     const SystemParams& params,
                                     const Grid& grid, int order = 4);

// Holomorphy probe: f sampled over the rectangle t_grid x tau_grid in the
// complex plane s = t + i tau.
struct HolomorphyProbe {
  std::function<Complex(Complex)> f;
  Grid t_grid;
  Grid tau_grid;
  std::string label;
};

// Laplace form checks d^2f/dt^2 + d^2f/dtau^2 = 0; it is necessary but not
// sufficient (anti-holomorphic functions also satisfy it). The first-order
// pair checks dg/dt = dh/dtau and dg/dtau = -dh/dt for f = g + i h, which
// rejects them.
enum class CrForm { Laplace, Pair };

ResidualReport cr_residual(const HolomorphyProbe& probe, CrForm form,
                           double tolerance, int order = 4);

}  // namespace entverify
