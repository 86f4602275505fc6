// residuals.hpp — residual evaluation of every equation variant under test:
// the relative and center-of-mass equations with the potential, the
// potential-free entangled form, the time equation, and the coordinate
// independence of the transformed system. Produces structured reports.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "entverify/config.hpp"
#include "entverify/core.hpp"
#include "entverify/diffcalc.hpp"
#include "entverify/oscillator.hpp"
#include "entverify/reference.hpp"
#include "entverify/report.hpp"

namespace entverify {

// Separable scalar potential V(x) = sum_a v(x_a). The only non-separable
// information is the label.
struct PotentialSpec {
  enum class Kind { Oscillator, CustomSeparable };
  Kind kind = Kind::Oscillator;
  AxisFn axis_v;
  std::string description;

  double total(const Vec3& x, int dim) const {
    double v = 0.0;
    for (int a = 0; a < dim; ++a) v += axis_v(x[a]);
    return v;
  }
};

PotentialSpec oscillator_potential(const SystemParams& params);
PotentialSpec quartic_potential();
// Piecewise-linear interpolation of (x, v) samples; x strictly increasing.
PotentialSpec tabulated_potential(const std::vector<double>& x,
                                  const std::vector<double>& v,
                                  std::string description);

// Evaluation strategy. Product states on large grids stream through
// per-axis tables; Generic materializes fields (cross-validation and
// non-product inputs). Auto picks streaming whenever the inputs factorize.
enum class EvalPath { Auto, Generic, Streaming };

// Residual of the relative equation:
//   (hbar^2/2 m_r) lap psi + (E_n - V) psi
ResidualReport residual_relative(const StateSpec& state,
                                 const PotentialSpec& potential,
                                 const SystemParams& params, const Grid& grid,
                                 int order = 4, double tolerance = 1e-6,
                                 EvalPath path = EvalPath::Auto);

// Same equation for the reference state with its own energy.
ResidualReport residual_reference(const ReferenceState& reference,
                                  const PotentialSpec& potential,
                                  const SystemParams& params, const Grid& grid,
                                  int order = 4, double tolerance = 1e-6,
                                  EvalPath path = EvalPath::Auto);

// Residual of the entangled relative equation:
//   (hbar^2/2 m_r) sum_i d^2 psi/dz_i* dz_i + (E_n - E_m) psi
// No potential enters this code path; that absence is the claim under test.
ResidualReport residual_entangled(const StateSpec& state,
                                  const ReferenceState& reference,
                                  const SystemParams& params, const Grid& grid,
                                  int order = 4, double tolerance = 1e-6,
                                  EvalPath path = EvalPath::Auto);

// Center-of-mass plane-wave residual:
//   (hbar^2/2 m_c) lap_X psi_E + (E - E_n) psi_E,  psi_E = exp(i P.X/hbar).
// The entangled form is the same evaluation since d/dZ = d/dX.
ResidualReport residual_com(const Vec3& P, double E_total, double E_n,
                            const SystemParams& params, const Grid& grid,
                            int order = 4, double tolerance = 1e-6);

// Time equation i hbar dPsi/dt = E Psi on a time grid, and its entangled
// twin along a constant-imaginary-part line of the complex world time.
ResidualReport residual_time(const StateSpec& state, double E,
                             const ReferenceState& reference,
                             double dt = 0.01, double t_extent = 1.0,
                             int order = 4, double tolerance = 1e-8);

// Cross-derivative independence of the entangled coordinates: the spatial
// map is the identity, the world time does not depend on the center of
// mass, and d tau/dx_i cancels against (hbar/E) L_i.
ResidualReport coordinate_independence_check(const ReferenceState& reference,
                                             const SystemParams& params,
                                             const Grid& grid, int order = 4,
                                             double tolerance = 1e-8);

struct SuiteResult {
  std::vector<ResidualReport> reports;
  bool aggregate_pass = true;
};

// Executes a named check list: "oscillator-core", "oscillator-full",
// "oracle-harmonic", "oracle-quartic", "reference-independence", "all".
// Unknown names throw UsageError.
SuiteResult run_suite(const RunConfig& config);

std::vector<std::string> suite_names();

}  // namespace entverify
