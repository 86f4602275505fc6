// core.hpp — physical parameters, grids, sampled fields and coordinate
// bookkeeping shared by the rest of the library.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace entverify {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

// Thrown when a physical or grid parameter is outside its admissible range.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an evaluation produced a non-finite value; carries the node.
struct EvalError : std::runtime_error {
  Vec3 where;
  EvalError(const std::string& msg, const Vec3& p)
      : std::runtime_error(msg), where(p) {}
};

// Thrown near a node of the reference state, where the time shift diverges.
struct SingularityError : std::runtime_error {
  Vec3 where;
  SingularityError(const std::string& msg, const Vec3& p)
      : std::runtime_error(msg), where(p) {}
};

// Thrown by iterative numerics that failed to converge.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec3& a) { return dot(a, a); }

// Two-particle system constants. m_c and m_r are derived on construction and
// kept alongside the inputs; hbar and omega default to 1 (natural units).
struct SystemParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double hbar = 1.0;
  double omega = 1.0;
  double m_c = 2.0;  // total mass, m1 + m2
  double m_r = 0.5;  // reduced mass, m1 m2 / (m1 + m2)
};

SystemParams make_system(double m1, double m2, double hbar = 1.0,
                         double omega = 1.0);

// Default parameter set used by the verification suites: unit masses,
// hbar = omega = 1, so m_c = 2 and m_r = 1/2.
inline SystemParams default_params() { return SystemParams{}; }

// Center-of-mass / relative split and its inverse.
//   X = (m1 x1 + m2 x2) / (m1 + m2),  x = x1 - x2
std::pair<Vec3, Vec3> com_split(const Vec3& x1, const Vec3& x2,
                                const SystemParams& params);
std::pair<Vec3, Vec3> com_join(const Vec3& X, const Vec3& x,
                               const SystemParams& params);

// Cartesian occupation numbers of a product eigenstate.
struct QuantumNumbers {
  int l1 = 0;
  int l2 = 0;
  int l3 = 0;
  int n() const { return l1 + l2 + l3; }
};

QuantumNumbers make_quantum_numbers(int l1, int l2, int l3);

// Rectangular grid, symmetric about the origin, identical on every axis.
// Per-axis node count is odd so the origin is always a node.
struct Grid {
  int dim = 1;  // 1 or 3
  double extent = 0.0;
  double spacing = 0.0;
  int points = 0;             // per-axis count
  std::vector<double> axis;   // node coordinates, axis[k] = (k - n)*spacing
  std::size_t size() const;   // points^dim
  int center() const { return (points - 1) / 2; }
};

Grid make_grid(double extent, double spacing, int dim);

// Complex samples over a grid. Node ordering is row-major with axis 1
// slowest: index = (i1*points + i2)*points + i3 for dim 3, index = i1 for
// dim 1. `margin` marks boundary layers that derivative operators have
// filled with NaN sentinels; norms skip them.
struct ComplexField {
  Grid grid;
  std::vector<Complex> values;
  int margin = 0;

  std::size_t index(int i1, int i2, int i3) const {
    const auto n = static_cast<std::size_t>(grid.points);
    return grid.dim == 1 ? static_cast<std::size_t>(i1)
                         : (static_cast<std::size_t>(i1) * n +
                            static_cast<std::size_t>(i2)) *
                                   n +
                               static_cast<std::size_t>(i3);
  }
};

// Evaluate fn at every node. Throws EvalError on a non-finite sample.
// For dim-1 grids the point passed to fn is {x, 0, 0}.
ComplexField sample(const std::function<Complex(const Vec3&)>& fn,
                    const Grid& grid);

// Interior RMS / max magnitude, skipping `margin` layers per side and any
// non-finite entries.
struct FieldNorms {
  double rms = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};
FieldNorms interior_norms(const ComplexField& field);

}  // namespace entverify
