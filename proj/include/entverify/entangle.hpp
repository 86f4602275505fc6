// entangle.hpp — the isometric conformal transformation to entangled
// coordinates (Z, z, s) and back, plus the entangled oscillator
// wavefunction and its consistency diagnostics.

#pragma once

#include <complex>
#include <iosfwd>

#include "entverify/core.hpp"
#include "entverify/oscillator.hpp"
#include "entverify/reference.hpp"

namespace entverify {

// Whether the time shift keeps the reference normalization constant
// (ln includes the peak prefactor) or measures the amplitude relative to
// its peak. The two choices differ by a constant factor in the entangled
// wavefunction; consistency_ratio quantifies it.
enum class TauNormalization { Keep, Drop };

// tau(x) = (hbar/E) ln |Psi'(x)|, the imaginary part of the world time.
// Throws SingularityError within kNodeEpsilon of a node of the reference
// and DomainError for E = 0.
double tau(const ReferenceState& reference, double E, const Vec3& x,
           TauNormalization norm = TauNormalization::Keep);

// A point in entangled coordinates. The transformation is an isometry:
// spatial coordinates stay real and equal to their lab values, so Z and z
// are stored as real vectors. `space` records whether s lives in the
// forward or the conjugate coordinate space.
struct EntangledPoint {
  enum class Space { Forward, Conjugate };
  Vec3 Z{};
  Vec3 z{};
  Complex s{};
  Space space = Space::Forward;
};

struct LabPoint {
  Vec3 X{};
  Vec3 x{};
  double t = 0.0;
};

// Forward map: Z = X, z = x, s = t + i tau(x).
EntangledPoint to_entangled(const Vec3& X, const Vec3& x, double t,
                            const ReferenceState& reference, double E,
                            TauNormalization norm = TauNormalization::Keep);

// Conjugate map: s* = t - i tau(x).
EntangledPoint to_conjugate(const Vec3& X, const Vec3& x, double t,
                            const ReferenceState& reference, double E,
                            TauNormalization norm = TauNormalization::Keep);

// Inverse of whichever map produced the point: t = s -/+ i tau(z).
LabPoint from_entangled(const EntangledPoint& p,
                        const ReferenceState& reference, double E,
                        TauNormalization norm = TauNormalization::Keep);

// Oscillator eigenfunction in entangled coordinates: the Hermite product
// with the plane-wave world-time phase exp(-i E s / hbar) and no Gaussian
// envelope.
Complex entangled_wavefunction(const QuantumNumbers& l,
                               const EntangledPoint& p,
                               const SystemParams& params);

// Pointwise ratio of the entangled wavefunction composed with the forward
// map against the lab-frame eigenfunction at (x, t), over the grid
// interior away from nodes of either function. The ratio is a constant;
// the spread measures how constant, and the mean reports which constant.
struct RatioStats {
  Complex mean{};
  double rel_spread = 0.0;
  std::size_t count = 0;
};
RatioStats consistency_ratio(const QuantumNumbers& l, const Grid& grid,
                             double t, const SystemParams& params,
                             TauNormalization norm = TauNormalization::Keep);

// CSV export of the time-shift field: one row per node with the axis
// coordinates, |Psi'| and tau.
void write_tau_field_csv(std::ostream& os, const ReferenceState& reference,
                         double E, const Grid& grid,
                         TauNormalization norm = TauNormalization::Keep);

}  // namespace entverify
