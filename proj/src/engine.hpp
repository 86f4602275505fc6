// engine.hpp — streaming reductions over separable fields.
//
// Residual checks on large 3D grids never materialize 3D arrays: a product
// state, its per-axis derivative arrays and a separable potential reduce
// every check to per-axis tables plus one fused pass over node indices.
// The evaluated numbers equal the materialized-field path to rounding; a
// cross-check test asserts that.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "entverify/core.hpp"

namespace entverify {

// lhs(i,j,k) = sum_a op_a[i_a] * prod_{b!=a} f_b[i_b]
//            + (c0 + sum_a w_a[i_a]) * prod_a f_a[i_a]
// reduced over the grid interior (margin layers skipped per axis). When
// mask_log arrays are present, nodes with sum_a mask_log_a[i_a] < log_eps
// are excluded (reference-amplitude node guard). Optional diff arrays track
// max |sum_a diff_a[i_a] * prod_{b!=a} f_b[i_b]| over the same nodes.
struct SeparableReduction {
  int dim = 3;
  int points = 0;
  int margin = 0;
  std::array<const std::vector<double>*, 3> f{};
  std::array<const std::vector<double>*, 3> op{};
  std::array<const std::vector<double>*, 3> w{};         // nullable
  double c0 = 0.0;
  std::array<const std::vector<double>*, 3> mask_log{};  // nullable
  double log_eps = 0.0;
  std::array<const std::vector<double>*, 3> diff{};      // nullable
};

struct ReductionNorms {
  double lhs_rms = 0.0;
  double lhs_max = 0.0;
  double psi_rms = 0.0;
  double diff_max = 0.0;
  std::size_t count = 0;
};

ReductionNorms reduce_separable(const SeparableReduction& in, int threads);

}  // namespace entverify
