// reference.hpp — the nodeless internal state that anchors the entangling
// coordinate transformation, together with its log-derivative field.

#pragma once

#include <array>
#include <functional>
#include <string>

#include "entverify/core.hpp"

namespace entverify {

// Per-axis real factor of a separable function.
using AxisFn = std::function<double(double)>;

// Amplitudes below this threshold count as a node of the reference state;
// the time shift diverges there and evaluation refuses to proceed.
inline constexpr double kNodeEpsilon = 1e-12;

// A reference eigenstate Psi'. Must be nodeless on the region of interest;
// real and positive up to a constant phase, so it is stored as a real
// amplitude. log_derivative(x)[i] = d ln Psi'(x) / dx_i.
//
// With zero center-of-mass momentum the amplitude depends only on the
// relative position, which is what the transformation assumes.
struct ReferenceState {
  enum class Source { ClosedForm, Numeric };

  std::function<double(const Vec3&)> psi_I;
  double energy_m = 0.0;
  std::function<Vec3(const Vec3&)> log_derivative;
  Vec3 com_momentum{0.0, 0.0, 0.0};
  Source source = Source::ClosedForm;
  int dim = 3;
  double hbar = 1.0;  // carried so the time shift needs no extra argument
  std::string label;

  // ln of the peak amplitude; subtracted when the time shift is configured
  // to drop the normalization constant.
  double peak_log = 0.0;

  // Separable structure: ln of the per-axis factor and its derivative.
  // Always set for the references this library builds; enables the
  // streaming evaluation path on large grids.
  std::array<AxisFn, 3> axis_log{};
  std::array<AxisFn, 3> axis_log_derivative{};

  bool separable() const {
    for (int a = 0; a < dim; ++a) {
      if (!axis_log[a] || !axis_log_derivative[a]) return false;
    }
    return true;
  }
};

}  // namespace entverify
