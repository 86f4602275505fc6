// stencil.hpp — 1D derivative operators on uniformly spaced lines.
//
// order 2: explicit central differences.
// order 4: compact Pade schemes,
//   first derivative:  (1/4) g'_{i-1} + g'_i + (1/4) g'_{i+1} = (3/2) D0 f
//   second derivative: (1/10) g''_{i-1} + g''_i + (1/10) g''_{i+1} = (6/5) D+D- f
// closed at the end rows with explicit one-sided fourth-order stencils.
// The compact schemes carry error constants h^4 f^(5)/~120 and h^4 f^(6)/~240,
// a factor ~2.5 below the explicit five-point forms, which the residual
// tolerances rely on.
//
// Every output row is finite; rows within margin() of an end carry larger
// closure constants and are excluded from norms by the callers.

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "entverify/core.hpp"

namespace entverify {

class LineDerivative {
 public:
  LineDerivative(int n, double h, int deriv, int order);

  int margin() const { return order_ == 4 ? 2 : 1; }
  int size() const { return n_; }

  void apply(std::span<const double> f, std::span<double> out) const {
    apply_impl(f, out);
  }
  void apply(std::span<const Complex> f, std::span<Complex> out) const {
    apply_impl(f, out);
  }

  std::vector<double> apply(const std::vector<double>& f) const {
    std::vector<double> out(f.size());
    apply_impl(std::span<const double>(f), std::span<double>(out));
    return out;
  }

 private:
  template <class T>
  void apply_impl(std::span<const T> f, std::span<T> out) const;

  int n_;
  double h_;
  int deriv_;
  int order_;
  // Thomas factorization of the constant-coefficient compact system with
  // identity end rows: inv_m_ = 1/(b_i - a_i cp_{i-1}), cp_ = c_i * inv_m_.
  std::vector<double> cp_;
  std::vector<double> inv_m_;
};

inline LineDerivative::LineDerivative(int n, double h, int deriv, int order)
    : n_(n), h_(h), deriv_(deriv), order_(order) {
  if (deriv != 1 && deriv != 2) throw DomainError("derivative must be 1 or 2");
  if (order != 2 && order != 4) throw DomainError("stencil order must be 2 or 4");
  if (n < 7) throw DomainError("grid too small for the stencil");
  if (!(h > 0.0)) throw DomainError("spacing must be positive");
  if (order == 4) {
    const double alpha = deriv == 1 ? 0.25 : 0.1;
    cp_.resize(n);
    inv_m_.resize(n);
    double cprev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ai = (i == 0 || i == n - 1) ? 0.0 : alpha;
      const double ci = (i == 0 || i == n - 1) ? 0.0 : alpha;
      const double m = 1.0 - ai * cprev;
      inv_m_[i] = 1.0 / m;
      cp_[i] = ci * inv_m_[i];
      cprev = cp_[i];
    }
  }
}

template <class T>
void LineDerivative::apply_impl(std::span<const T> f, std::span<T> out) const {
  const int n = n_;
  const double h = h_;

  if (order_ == 2) {
    if (deriv_ == 1) {
      const double inv = 1.0 / (2.0 * h);
      out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
      for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv;
      out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    } else {
      const double inv = 1.0 / (h * h);
      out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
      for (int i = 1; i < n - 1; ++i)
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
      out[n - 1] =
          (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
    }
    return;
  }

  // Order 4: build the right-hand side, then run the cached Thomas sweep.
  if (deriv_ == 1) {
    const double c = 1.5 / (2.0 * h);
    const double inv12h = 1.0 / (12.0 * h);
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] -
              3.0 * f[4]) *
             inv12h;
    for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) * c;
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] -
                  16.0 * f[n - 4] + 3.0 * f[n - 5]) *
                 inv12h;
  } else {
    const double c = 1.2 / (h * h);
    const double inv12h2 = 1.0 / (12.0 * h * h);
    out[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] +
              61.0 * f[4] - 10.0 * f[5]) *
             inv12h2;
    for (int i = 1; i < n - 1; ++i)
      out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * c;
    out[n - 1] = (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] -
                  156.0 * f[n - 4] + 61.0 * f[n - 5] - 10.0 * f[n - 6]) *
                 inv12h2;
  }

  const double alpha = deriv_ == 1 ? 0.25 : 0.1;
  out[0] = out[0] * inv_m_[0];
  for (int i = 1; i < n - 1; ++i)
    out[i] = (out[i] - alpha * out[i - 1]) * inv_m_[i];
  out[n - 1] = out[n - 1] * inv_m_[n - 1];
  for (int i = n - 2; i >= 0; --i) out[i] = out[i] - cp_[i] * out[i + 1];
}

}  // namespace entverify
