#include "engine.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace entverify {

namespace {

struct Partial {
  double lhs2 = 0.0;
  double psi2 = 0.0;
  double lhs_max = 0.0;
  double diff_max = 0.0;
  std::size_t count = 0;
};

template <bool HasW, bool HasMask, bool HasDiff>
void reduce_plane(const SeparableReduction& in, int i, Partial& acc) {
  const int n = in.points;
  const int m = in.margin;
  const double* __restrict f1 = in.f[0]->data();
  const double* __restrict f2 = in.f[1]->data();
  const double* __restrict f3 = in.f[2]->data();
  const double* __restrict o1 = in.op[0]->data();
  const double* __restrict o2 = in.op[1]->data();
  const double* __restrict o3 = in.op[2]->data();
  const double* __restrict w1 = HasW ? in.w[0]->data() : nullptr;
  const double* __restrict w2 = HasW ? in.w[1]->data() : nullptr;
  const double* __restrict w3 = HasW ? in.w[2]->data() : nullptr;
  const double* __restrict g1 = HasMask ? in.mask_log[0]->data() : nullptr;
  const double* __restrict g2 = HasMask ? in.mask_log[1]->data() : nullptr;
  const double* __restrict g3 = HasMask ? in.mask_log[2]->data() : nullptr;
  const double* __restrict d1 = HasDiff ? in.diff[0]->data() : nullptr;
  const double* __restrict d2 = HasDiff ? in.diff[1]->data() : nullptr;
  const double* __restrict d3 = HasDiff ? in.diff[2]->data() : nullptr;

  for (int j = m; j < n - m; ++j) {
    const double p12 = f1[i] * f2[j];
    const double o12 = o1[i] * f2[j] + f1[i] * o2[j];
    double w12 = in.c0;
    if constexpr (HasW) w12 += w1[i] + w2[j];
    double need = 0.0;
    if constexpr (HasMask) need = in.log_eps - g1[i] - g2[j];
    double dd12 = 0.0;
    if constexpr (HasDiff) dd12 = d1[i] * f2[j] + f1[i] * d2[j];

    double lhs2 = 0.0, psi2 = 0.0, lmax = 0.0, dmax = 0.0;
    std::size_t cnt = 0;
    for (int k = m; k < n - m; ++k) {
      const double psi = p12 * f3[k];
      double lhs = o12 * f3[k] + p12 * o3[k] + psi * w12;
      if constexpr (HasW) lhs += psi * w3[k];
      double inc = 1.0;
      if constexpr (HasMask) inc = (g3[k] >= need) ? 1.0 : 0.0;
      lhs2 += inc * lhs * lhs;
      psi2 += inc * psi * psi;
      const double a = inc * std::abs(lhs);
      lmax = a > lmax ? a : lmax;
      if constexpr (HasDiff) {
        const double dv = inc * std::abs(dd12 * f3[k] + p12 * d3[k]);
        dmax = dv > dmax ? dv : dmax;
      }
      cnt += static_cast<std::size_t>(inc);
    }
    acc.lhs2 += lhs2;
    acc.psi2 += psi2;
    acc.lhs_max = std::max(acc.lhs_max, lmax);
    acc.diff_max = std::max(acc.diff_max, dmax);
    acc.count += cnt;
  }
}

template <bool HasW, bool HasMask, bool HasDiff>
ReductionNorms run3d(const SeparableReduction& in, int threads) {
  const int n = in.points;
  const int m = in.margin;
  std::vector<Partial> partials(static_cast<std::size_t>(n));
  parallel_for_index(n - 2 * m, threads, [&](int offset) {
    const int i = m + offset;
    reduce_plane<HasW, HasMask, HasDiff>(in, i, partials[static_cast<std::size_t>(i)]);
  });
  Partial total;
  for (int i = m; i < n - m; ++i) {
    const Partial& p = partials[static_cast<std::size_t>(i)];
    total.lhs2 += p.lhs2;
    total.psi2 += p.psi2;
    total.lhs_max = std::max(total.lhs_max, p.lhs_max);
    total.diff_max = std::max(total.diff_max, p.diff_max);
    total.count += p.count;
  }
  ReductionNorms out;
  out.count = total.count;
  if (total.count > 0) {
    out.lhs_rms = std::sqrt(total.lhs2 / static_cast<double>(total.count));
    out.psi_rms = std::sqrt(total.psi2 / static_cast<double>(total.count));
  }
  out.lhs_max = total.lhs_max;
  out.diff_max = total.diff_max;
  return out;
}

ReductionNorms run1d(const SeparableReduction& in) {
  const int n = in.points;
  const int m = in.margin;
  const std::vector<double>& f = *in.f[0];
  const std::vector<double>& op = *in.op[0];
  Partial total;
  for (int i = m; i < n - m; ++i) {
    if (in.mask_log[0] && (*in.mask_log[0])[static_cast<std::size_t>(i)] < in.log_eps)
      continue;
    const double psi = f[static_cast<std::size_t>(i)];
    double lhs = op[static_cast<std::size_t>(i)] + psi * in.c0;
    if (in.w[0]) lhs += psi * (*in.w[0])[static_cast<std::size_t>(i)];
    total.lhs2 += lhs * lhs;
    total.psi2 += psi * psi;
    total.lhs_max = std::max(total.lhs_max, std::abs(lhs));
    if (in.diff[0])
      total.diff_max = std::max(total.diff_max,
                                std::abs((*in.diff[0])[static_cast<std::size_t>(i)]));
    ++total.count;
  }
  ReductionNorms out;
  out.count = total.count;
  if (total.count > 0) {
    out.lhs_rms = std::sqrt(total.lhs2 / static_cast<double>(total.count));
    out.psi_rms = std::sqrt(total.psi2 / static_cast<double>(total.count));
  }
  out.lhs_max = total.lhs_max;
  out.diff_max = total.diff_max;
  return out;
}

}  // namespace

ReductionNorms reduce_separable(const SeparableReduction& in, int threads) {
  if (in.dim == 1) return run1d(in);
  const bool has_w = in.w[0] != nullptr;
  const bool has_mask = in.mask_log[0] != nullptr;
  const bool has_diff = in.diff[0] != nullptr;
  if (has_w) {
    if (has_mask)
      return has_diff ? run3d<true, true, true>(in, threads)
                      : run3d<true, true, false>(in, threads);
    return has_diff ? run3d<true, false, true>(in, threads)
                    : run3d<true, false, false>(in, threads);
  }
  if (has_mask)
    return has_diff ? run3d<false, true, true>(in, threads)
                    : run3d<false, true, false>(in, threads);
  return has_diff ? run3d<false, false, true>(in, threads)
                  : run3d<false, false, false>(in, threads);
}

}  // namespace entverify
