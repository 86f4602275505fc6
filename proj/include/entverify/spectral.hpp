// spectral.hpp — independent 1D eigensolver for bounded potentials on a
// grid: three-point discretization, Sturm-sequence bisection for the
// eigenvalues, inverse iteration for the eigenvectors, Richardson-refined
// eigenvalue reporting. Separable 3D states and references are composed
// from per-axis solutions.

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "entverify/core.hpp"
#include "entverify/oscillator.hpp"
#include "entverify/reference.hpp"

namespace entverify {

struct EigenPair {
  double energy = 0.0;               // Richardson-refined
  double energy_raw = 0.0;           // value on the stated grid
  std::vector<double> wavefunction;  // one sample per grid node, normalized
  int node_count = 0;                // sign changes; equals the state index
};

// Lowest k eigenpairs of -(hbar^2/2 m_r) D2 + diag(v) with Dirichlet walls,
// v sampled on the grid nodes. k <= 12.
std::vector<EigenPair> solve_1d(const std::vector<double>& v, const Grid& grid,
                                const SystemParams& params, int k);

// Convenience overload sampling v(x) on the nodes.
std::vector<EigenPair> solve_1d(const AxisFn& v, const Grid& grid,
                                const SystemParams& params, int k);

// Half-width that keeps Dirichlet truncation below discretization error:
// 1.5x the classical turning point of the k-th state, from a coarse
// bootstrap solve.
double auto_extent_1d(const AxisFn& v, const SystemParams& params, int k);

// Reference built from a nodeless numeric ground state: ln|psi| is
// interpolated linearly per axis (clipped where |psi| < kNodeEpsilon and
// extended with the boundary slope), and the log-derivative comes from
// finite differences of ln|psi|. dim = 3 composes the same 1D solution on
// every axis; E_m scales accordingly.
ReferenceState make_reference_from_numeric(const EigenPair& ground,
                                           const Grid& grid,
                                           const SystemParams& params,
                                           int dim = 3);

// Product state from three per-axis eigenpairs of the same potential
// family: Psi(x) = prod psi_j(x_j), E = sum E_j.
StateSpec separable_compose(const std::array<const EigenPair*, 3>& axis_states,
                            const Grid& grid, const SystemParams& params);

// Single-axis state wrapping one eigenpair.
StateSpec numeric_state_1d(const EigenPair& pair, const Grid& grid);

// CSV export: header line with the energy, then one (x, psi) row per node.
void write_eigenpair_csv(std::ostream& os, const EigenPair& pair,
                         const Grid& grid);

}  // namespace entverify
