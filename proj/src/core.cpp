#include "entverify/core.hpp"

#include <cmath>

namespace entverify {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be strictly positive");
  }
}
}  // namespace

SystemParams make_system(double m1, double m2, double hbar, double omega) {
  require_positive(m1, "m1");
  require_positive(m2, "m2");
  require_positive(hbar, "hbar");
  require_positive(omega, "omega");
  SystemParams p;
  p.m1 = m1;
  p.m2 = m2;
  p.hbar = hbar;
  p.omega = omega;
  p.m_c = m1 + m2;
  p.m_r = m1 * m2 / p.m_c;
  return p;
}

std::pair<Vec3, Vec3> com_split(const Vec3& x1, const Vec3& x2,
                                const SystemParams& params) {
  Vec3 X, x;
  for (int i = 0; i < 3; ++i) {
    X[i] = (params.m1 * x1[i] + params.m2 * x2[i]) / params.m_c;
    x[i] = x1[i] - x2[i];
  }
  return {X, x};
}

std::pair<Vec3, Vec3> com_join(const Vec3& X, const Vec3& x,
                               const SystemParams& params) {
  Vec3 x1, x2;
  for (int i = 0; i < 3; ++i) {
    x1[i] = X[i] + params.m2 / params.m_c * x[i];
    x2[i] = X[i] - params.m1 / params.m_c * x[i];
  }
  return {x1, x2};
}

QuantumNumbers make_quantum_numbers(int l1, int l2, int l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) {
    throw DomainError("quantum numbers must be non-negative");
  }
  return QuantumNumbers{l1, l2, l3};
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(points);
  return s;
}

Grid make_grid(double extent, double spacing, int dim) {
  if (dim != 1 && dim != 3) throw DomainError("grid dim must be 1 or 3");
  require_positive(extent, "extent");
  require_positive(spacing, "spacing");
  const double ratio = extent / spacing;
  const auto half = static_cast<int>(std::llround(ratio));
  if (std::abs(ratio - half) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("extent must be an integer multiple of spacing");
  }
  // 5 nodes is the smallest symmetric set; derivative operators impose
  // their own stricter minimum.
  if (half < 2) throw DomainError("extent/spacing must be at least 2");
  Grid g;
  g.dim = dim;
  g.extent = extent;
  g.spacing = spacing;
  g.points = 2 * half + 1;
  g.axis.resize(g.points);
  for (int k = 0; k < g.points; ++k) {
    g.axis[k] = static_cast<double>(k - half) * spacing;
  }
  return g;
}

ComplexField sample(const std::function<Complex(const Vec3&)>& fn,
                    const Grid& grid) {
  ComplexField field;
  field.grid = grid;
  field.values.resize(grid.size());
  auto eval = [&](const Vec3& p) {
    const Complex v = fn(p);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw EvalError("non-finite sample", p);
    }
    return v;
  };
  if (grid.dim == 1) {
    for (int i = 0; i < grid.points; ++i) {
      field.values[static_cast<std::size_t>(i)] = eval({grid.axis[i], 0, 0});
    }
    return field;
  }
  std::size_t idx = 0;
  for (int i = 0; i < grid.points; ++i) {
    for (int j = 0; j < grid.points; ++j) {
      for (int k = 0; k < grid.points; ++k) {
        field.values[idx++] = eval({grid.axis[i], grid.axis[j], grid.axis[k]});
      }
    }
  }
  return field;
}

FieldNorms interior_norms(const ComplexField& field) {
  const int m = field.margin;
  const int lo = m;
  const int hi = field.grid.points - m;
  FieldNorms out;
  double sum2 = 0.0;
  auto absorb = [&](const Complex& v) {
    const double a2 = std::norm(v);
    if (!std::isfinite(a2)) return;
    sum2 += a2;
    out.max = std::max(out.max, std::sqrt(a2));
    ++out.count;
  };
  if (field.grid.dim == 1) {
    for (int i = lo; i < hi; ++i) absorb(field.values[field.index(i, 0, 0)]);
  } else {
    for (int i = lo; i < hi; ++i)
      for (int j = lo; j < hi; ++j)
        for (int k = lo; k < hi; ++k) absorb(field.values[field.index(i, j, k)]);
  }
  if (out.count > 0) out.rms = std::sqrt(sum2 / static_cast<double>(out.count));
  return out;
}

}  // namespace entverify
