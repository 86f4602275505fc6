#include "entverify/residuals.hpp"

#include <algorithm>
#include <cmath>

#include "engine.hpp"
#include "entverify/entangle.hpp"
#include "entverify/spectral.hpp"
#include "parallel.hpp"
#include "stencil.hpp"

namespace entverify {

PotentialSpec oscillator_potential(const SystemParams& params) {
  PotentialSpec p;
  p.kind = PotentialSpec::Kind::Oscillator;
  const double c = 0.5 * params.m_r * params.omega * params.omega;
  p.axis_v = [c](double u) { return c * u * u; };
  p.description = "oscillator";
  return p;
}

PotentialSpec quartic_potential() {
  PotentialSpec p;
  p.kind = PotentialSpec::Kind::CustomSeparable;
  p.axis_v = [](double u) { return u * u * u * u; };
  p.description = "quartic";
  return p;
}

PotentialSpec tabulated_potential(const std::vector<double>& x,
                                  const std::vector<double>& v,
                                  std::string description) {
  if (x.size() != v.size() || x.size() < 2) {
    throw DomainError("potential table needs matching x,v columns");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw DomainError("potential x column must increase");
  }
  PotentialSpec p;
  p.kind = PotentialSpec::Kind::CustomSeparable;
  p.description = std::move(description);
  p.axis_v = [x, v](double u) {
    if (u <= x.front()) return v.front();
    if (u >= x.back()) return v.back();
    const auto it = std::upper_bound(x.begin(), x.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double w = (u - x[i]) / (x[i + 1] - x[i]);
    return v[i] + w * (v[i + 1] - v[i]);
  };
  return p;
}

namespace {

std::vector<double> sample_axis(const AxisFn& f, const Grid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i)
    out[static_cast<std::size_t>(i)] = f(grid.axis[static_cast<std::size_t>(i)]);
  return out;
}

double energy_scale(double E, const SystemParams& params) {
  return std::max(std::abs(E), params.hbar * params.omega);
}

ResidualReport make_report(const std::string& name, const Grid& grid,
                           const ReductionNorms& norms, double e_scale,
                           double tolerance, std::optional<int> n,
                           std::optional<int> m) {
  ResidualReport r;
  r.check_name = name;
  r.grid_h = grid.spacing;
  r.grid_extent = grid.extent;
  r.n = n;
  r.m = m;
  const double denom = e_scale * norms.psi_rms;
  r.residual_rms = denom > 0 ? norms.lhs_rms / denom : norms.lhs_rms;
  r.residual_max = denom > 0 ? norms.lhs_max / denom : norms.lhs_max;
  r.tolerance = tolerance;
  return finish_report(r);
}

bool want_streaming(EvalPath path, bool separable) {
  switch (path) {
    case EvalPath::Generic:
      return false;
    case EvalPath::Streaming:
      if (!separable) throw DomainError("streaming path needs product inputs");
      return true;
    case EvalPath::Auto:
      return separable;
  }
  return separable;
}

// Relative-equation reduction shared by the state and reference checks.
ResidualReport schroedinger_residual(const std::string& name,
                                     std::array<std::vector<double>, 3> f,
                                     double energy,
                                     const PotentialSpec& potential,
                                     const SystemParams& params,
                                     const Grid& grid, int order,
                                     double tolerance, std::optional<int> n,
                                     std::optional<int> m) {
  const double kinetic = params.hbar * params.hbar / (2.0 * params.m_r);
  const LineDerivative d2(grid.points, grid.spacing, 2, order);
  std::array<std::vector<double>, 3> op{}, w{};
  std::vector<double> vax = sample_axis(potential.axis_v, grid);
  for (int a = 0; a < grid.dim; ++a) {
    op[static_cast<std::size_t>(a)] = d2.apply(f[static_cast<std::size_t>(a)]);
    for (auto& x : op[static_cast<std::size_t>(a)]) x *= kinetic;
    w[static_cast<std::size_t>(a)].resize(vax.size());
    for (std::size_t i = 0; i < vax.size(); ++i)
      w[static_cast<std::size_t>(a)][i] = -vax[i];
  }
  SeparableReduction in;
  in.dim = grid.dim;
  in.points = grid.points;
  in.margin = d2.margin();
  for (int a = 0; a < grid.dim; ++a) {
    in.f[static_cast<std::size_t>(a)] = &f[static_cast<std::size_t>(a)];
    in.op[static_cast<std::size_t>(a)] = &op[static_cast<std::size_t>(a)];
    in.w[static_cast<std::size_t>(a)] = &w[static_cast<std::size_t>(a)];
  }
  in.c0 = energy;
  const ReductionNorms norms = reduce_separable(in, thread_budget());
  return make_report(name, grid, norms, energy_scale(energy, params), tolerance,
                     n, m);
}

ResidualReport schroedinger_residual_generic(
    const std::string& name, const std::function<Complex(const Vec3&)>& psi,
    double energy, const PotentialSpec& potential, const SystemParams& params,
    const Grid& grid, int order, double tolerance, std::optional<int> n,
    std::optional<int> m) {
  const double kinetic = params.hbar * params.hbar / (2.0 * params.m_r);
  ComplexField field = sample(psi, grid);
  ComplexField lhs;
  lhs.grid = grid;
  lhs.values.assign(field.values.size(), Complex{});
  int margin = 0;
  for (int axis = 0; axis < grid.dim; ++axis) {
    StencilSpec spec{order, axis, 2};
    ComplexField d2 = fd_derivative(field, spec);
    margin = d2.margin;
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
      lhs.values[i] += kinetic * d2.values[i];
  }
  const int np = grid.points;
  std::size_t idx = 0;
  auto add_node = [&](const Vec3& x, std::size_t i) {
    lhs.values[i] += (energy - potential.total(x, grid.dim)) * field.values[i];
  };
  if (grid.dim == 1) {
    for (int i = 0; i < np; ++i, ++idx)
      add_node({grid.axis[static_cast<std::size_t>(i)], 0, 0}, idx);
  } else {
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int k = 0; k < np; ++k, ++idx)
          add_node({grid.axis[static_cast<std::size_t>(i)],
                    grid.axis[static_cast<std::size_t>(j)],
                    grid.axis[static_cast<std::size_t>(k)]},
                   idx);
  }
  lhs.margin = margin;
  const FieldNorms ln = interior_norms(lhs);
  ComplexField psic = field;
  psic.margin = margin;
  const FieldNorms pn = interior_norms(psic);
  ReductionNorms norms;
  norms.lhs_rms = ln.rms;
  norms.lhs_max = ln.max;
  norms.psi_rms = pn.rms;
  norms.count = ln.count;
  return make_report(name, grid, norms, energy_scale(energy, params), tolerance,
                     n, m);
}

}  // namespace

ResidualReport residual_relative(const StateSpec& state,
                                 const PotentialSpec& potential,
                                 const SystemParams& params, const Grid& grid,
                                 int order, double tolerance, EvalPath path) {
  const std::string name = "relative-" + state.label;
  if (want_streaming(path, state.separable())) {
    std::array<std::vector<double>, 3> f{};
    for (int a = 0; a < grid.dim; ++a)
      f[static_cast<std::size_t>(a)] =
          sample_axis(state.axis_factor[static_cast<std::size_t>(a)], grid);
    return schroedinger_residual(name, std::move(f), state.energy, potential,
                                 params, grid, order, tolerance, state.qn.n(),
                                 std::nullopt);
  }
  return schroedinger_residual_generic(name, state.psi, state.energy, potential,
                                       params, grid, order, tolerance,
                                       state.qn.n(), std::nullopt);
}

// declared below with the entangled check
std::optional<int> reference_level(const ReferenceState& reference,
                                   const SystemParams& params);

ResidualReport residual_reference(const ReferenceState& reference,
                                  const PotentialSpec& potential,
                                  const SystemParams& params, const Grid& grid,
                                  int order, double tolerance, EvalPath path) {
  const std::string name = "reference-" + reference.label;
  const std::optional<int> m_label = reference_level(reference, params);
  if (want_streaming(path, reference.separable())) {
    std::array<std::vector<double>, 3> f{};
    for (int a = 0; a < grid.dim; ++a) {
      f[static_cast<std::size_t>(a)] = sample_axis(
          reference.axis_log[static_cast<std::size_t>(a)], grid);
      for (auto& v : f[static_cast<std::size_t>(a)]) v = std::exp(v);
    }
    return schroedinger_residual(name, std::move(f), reference.energy_m,
                                 potential, params, grid, order, tolerance,
                                 std::nullopt, m_label);
  }
  auto psi = [&reference](const Vec3& x) {
    return Complex(reference.psi_I(x), 0.0);
  };
  return schroedinger_residual_generic(name, psi, reference.energy_m, potential,
                                       params, grid, order, tolerance,
                                       std::nullopt, m_label);
}

// Ladder index of the reference where its energy sits on the oscillator
// ladder; empty otherwise (numeric references in general).
std::optional<int> reference_level(const ReferenceState& reference,
                                   const SystemParams& params) {
  const double hw = params.hbar * params.omega;
  const double level =
      reference.energy_m / hw - 0.5 * static_cast<double>(reference.dim);
  const double rounded = std::round(level);
  if (rounded >= 0.0 && std::abs(level - rounded) <= 1e-9) {
    return static_cast<int>(rounded);
  }
  return std::nullopt;
}

ResidualReport residual_entangled(const StateSpec& state,
                                  const ReferenceState& reference,
                                  const SystemParams& params, const Grid& grid,
                                  int order, double tolerance, EvalPath path) {
  // No potential appears anywhere below: the entangled equation closes on
  // the energies alone.
  const std::string name = "entangled-" + state.label;
  const double kinetic = params.hbar * params.hbar / (2.0 * params.m_r);
  const double delta_e = state.energy - reference.energy_m;
  const double e_scale = energy_scale(state.energy, params);
  const std::optional<int> m_label = reference_level(reference, params);

  if (want_streaming(path, state.separable() && reference.separable())) {
    const LineDerivative d2(grid.points, grid.spacing, 2, order);
    std::array<std::vector<double>, 3> f{}, op{}, logs{};
    for (int a = 0; a < grid.dim; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      f[ai] = sample_axis(state.axis_factor[ai], grid);
      logs[ai] = sample_axis(reference.axis_log[ai], grid);
      std::vector<double> phi(logs[ai].size());
      for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::exp(logs[ai][i]);
      const std::vector<double> d2f = d2.apply(f[ai]);
      const std::vector<double> d2phi = d2.apply(phi);
      op[ai].resize(d2f.size());
      for (std::size_t i = 0; i < d2f.size(); ++i) {
        op[ai][i] = kinetic * (d2f[i] - f[ai][i] / phi[i] * d2phi[i]);
      }
    }
    SeparableReduction in;
    in.dim = grid.dim;
    in.points = grid.points;
    in.margin = d2.margin();
    for (int a = 0; a < grid.dim; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      in.f[ai] = &f[ai];
      in.op[ai] = &op[ai];
      in.mask_log[ai] = &logs[ai];
    }
    in.c0 = delta_e;
    in.log_eps = std::log(kNodeEpsilon);
    const ReductionNorms norms = reduce_separable(in, thread_budget());
    return make_report(name, grid, norms, e_scale, tolerance, state.qn.n(),
                       m_label);
  }

  MixedSecondResult mixed =
      mixed_second(state, reference, grid, order, MixedRoute::Identity);
  ComplexField psi = sample(state.psi, grid);
  ComplexField lhs;
  lhs.grid = grid;
  lhs.margin = mixed.field.margin;
  lhs.values.resize(psi.values.size());
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    lhs.values[i] = kinetic * mixed.field.values[i] + delta_e * psi.values[i];
  }
  // node guard: drop points where the reference amplitude is below threshold
  const int np = grid.points;
  std::size_t idx = 0;
  auto guard = [&](const Vec3& x, std::size_t i) {
    if (reference.psi_I(x) < kNodeEpsilon) {
      lhs.values[i] = Complex(std::nan(""), std::nan(""));
      psi.values[i] = Complex(std::nan(""), std::nan(""));
    }
  };
  if (grid.dim == 1) {
    for (int i = 0; i < np; ++i, ++idx)
      guard({grid.axis[static_cast<std::size_t>(i)], 0, 0}, idx);
  } else {
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int k = 0; k < np; ++k, ++idx)
          guard({grid.axis[static_cast<std::size_t>(i)],
                 grid.axis[static_cast<std::size_t>(j)],
                 grid.axis[static_cast<std::size_t>(k)]},
                idx);
  }
  const FieldNorms ln = interior_norms(lhs);
  psi.margin = lhs.margin;
  const FieldNorms pn = interior_norms(psi);
  ReductionNorms norms;
  norms.lhs_rms = ln.rms;
  norms.lhs_max = ln.max;
  norms.psi_rms = pn.rms;
  norms.count = ln.count;
  return make_report(name, grid, norms, e_scale, tolerance, state.qn.n(),
                     m_label);
}

ResidualReport residual_com(const Vec3& P, double E_total, double E_n,
                            const SystemParams& params, const Grid& grid,
                            int order, double tolerance) {
  const double kinetic = params.hbar * params.hbar / (2.0 * params.m_c);
  auto plane_wave = [&](const Vec3& X) {
    return std::exp(Complex(0.0, dot(P, X) / params.hbar));
  };
  ComplexField field = sample(plane_wave, grid);
  ComplexField lhs;
  lhs.grid = grid;
  lhs.values.assign(field.values.size(), Complex{});
  int margin = 0;
  for (int axis = 0; axis < grid.dim; ++axis) {
    StencilSpec spec{order, axis, 2};
    ComplexField d2 = fd_derivative(field, spec);
    margin = d2.margin;
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
      lhs.values[i] += kinetic * d2.values[i];
  }
  for (std::size_t i = 0; i < lhs.values.size(); ++i)
    lhs.values[i] += (E_total - E_n) * field.values[i];
  lhs.margin = margin;
  const FieldNorms ln = interior_norms(lhs);
  field.margin = margin;
  const FieldNorms pn = interior_norms(field);
  ReductionNorms norms;
  norms.lhs_rms = ln.rms;
  norms.lhs_max = ln.max;
  norms.psi_rms = pn.rms;
  norms.count = ln.count;
  // identical evaluation in entangled coordinates: d/dZ = d/dX
  return make_report("com-plane-wave", grid, norms,
                     energy_scale(E_total, params), tolerance, std::nullopt,
                     std::nullopt);
}

ResidualReport residual_time(const StateSpec& state, double E,
                             const ReferenceState& reference, double dt,
                             double t_extent, int order, double tolerance) {
  const Grid tg = make_grid(t_extent, dt, 1);
  // representative point: largest amplitude among a few probes
  const Vec3 candidates[] = {
      {0, 0, 0}, {0.5, 0.3, 0.2}, {1.0, 0.7, 0.4}, {0.25, 0.15, 0.35}};
  Vec3 x_star = candidates[0];
  double best = -1.0;
  for (const Vec3& c : candidates) {
    const double a = std::abs(state.psi(c));
    if (a > best) {
      best = a;
      x_star = c;
    }
  }
  const Complex amp = state.psi(x_star);
  const LineDerivative d1(tg.points, tg.spacing, 1, order);
  const Complex i_unit(0.0, 1.0);

  // The wavefunction evolves with its own phase exp(-i E_state t / hbar);
  // the check asserts i hbar d/dt = E with the claimed E, so a mismatched
  // or sign-flipped claim fails at the |E_state - E| scale.
  auto run_branch = [&](Complex scale) {
    std::vector<Complex> f(static_cast<std::size_t>(tg.points));
    for (int i = 0; i < tg.points; ++i) {
      f[static_cast<std::size_t>(i)] =
          scale * std::exp(-i_unit * state.energy *
                           tg.axis[static_cast<std::size_t>(i)] /
                           reference.hbar);
    }
    std::vector<Complex> df(f.size());
    d1.apply(std::span<const Complex>(f), std::span<Complex>(df));
    double sum2 = 0.0, maxr = 0.0, f2 = 0.0;
    std::size_t count = 0;
    for (int i = d1.margin(); i < tg.points - d1.margin(); ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const Complex r = i_unit * reference.hbar * df[ii] - E * f[ii];
      sum2 += std::norm(r);
      maxr = std::max(maxr, std::abs(r));
      f2 += std::norm(f[ii]);
      ++count;
    }
    const double frms = count ? std::sqrt(f2 / static_cast<double>(count)) : 1.0;
    const double scale_e = std::max(std::abs(E), 1.0);
    return std::pair<double, double>(
        std::sqrt(sum2 / static_cast<double>(count)) / (scale_e * frms),
        maxr / (scale_e * frms));
  };

  // lab frame: phase exp(-iEt/hbar); entangled frame: constant-imaginary
  // world-time line, which multiplies the branch by a constant
  const auto lab = run_branch(amp);
  const double tau0 = tau(reference, state.energy, x_star);
  const auto ent = run_branch(amp * std::exp(state.energy * tau0 / reference.hbar));

  ResidualReport r;
  r.check_name = "time-phase-" + state.label;
  r.grid_h = tg.spacing;
  r.grid_extent = tg.extent;
  r.n = state.qn.n();
  r.residual_rms = std::max(lab.first, ent.first);
  r.residual_max = std::max(lab.second, ent.second);
  r.tolerance = tolerance;
  return finish_report(r);
}

ResidualReport coordinate_independence_check(const ReferenceState& reference,
                                             const SystemParams& params,
                                             const Grid& grid, int order,
                                             double tolerance) {
  (void)params;
  const LineDerivative d1(grid.points, grid.spacing, 1, order);
  const int m = d1.margin();
  double sum2 = 0.0, maxe = 0.0;
  std::size_t count = 0;
  auto absorb = [&](double err) {
    sum2 += err * err;
    maxe = std::max(maxe, std::abs(err));
    ++count;
  };

  // d tau/dx_i must cancel against (hbar/E) L_i; equivalently the
  // log-amplitude slope matches the log-derivative field. Checked on the
  // base axis and on a translated axis (the shift must not matter).
  for (int axis = 0; axis < reference.dim; ++axis) {
    for (double shift : {0.0, 0.37 * grid.spacing}) {
      std::vector<double> lam(static_cast<std::size_t>(grid.points));
      std::vector<double> Lref(static_cast<std::size_t>(grid.points));
      for (int i = 0; i < grid.points; ++i) {
        Vec3 x{0, 0, 0};
        x[axis] = grid.axis[static_cast<std::size_t>(i)] + shift;
        const double amp = reference.psi_I(x);
        lam[static_cast<std::size_t>(i)] =
            std::log(std::max(amp, kNodeEpsilon));
        Lref[static_cast<std::size_t>(i)] = reference.log_derivative(x)[axis];
      }
      std::vector<double> dlam(lam.size());
      d1.apply(std::span<const double>(lam), std::span<double>(dlam));
      for (int i = m; i < grid.points - m; ++i) {
        Vec3 x{0, 0, 0};
        x[axis] = grid.axis[static_cast<std::size_t>(i)] + shift;
        if (reference.psi_I(x) < kNodeEpsilon) continue;
        absorb(dlam[static_cast<std::size_t>(i)] -
               Lref[static_cast<std::size_t>(i)]);
      }
    }
  }

  // spatial map is the identity and conjugation mirrors the world time
  const double E = reference.energy_m != 0.0 ? reference.energy_m : 1.0;
  const Vec3 probes[] = {{0.1, -0.2, 0.3}, {0.5, 0.25, -0.75}, {0, 0, 0}};
  for (const Vec3& x : probes) {
    const Vec3 X{0.4, -1.2, 2.0};
    const EntangledPoint p = to_entangled(X, x, 0.7, reference, E);
    const EntangledPoint q = to_conjugate(X, x, 0.7, reference, E);
    double err = 0.0;
    for (int a = 0; a < 3; ++a) {
      err = std::max(err, std::abs(p.Z[a] - X[a]));
      err = std::max(err, std::abs(p.z[a] - x[a]));
    }
    err = std::max(err, std::abs(p.s - std::conj(q.s)));
    absorb(err);
  }

  ResidualReport r;
  r.check_name = "coordinate-independence";
  r.grid_h = grid.spacing;
  r.grid_extent = grid.extent;
  r.residual_rms = count ? std::sqrt(sum2 / static_cast<double>(count)) : 0.0;
  r.residual_max = maxe;
  r.tolerance = tolerance;
  return finish_report(r);
}

namespace {

void append(SuiteResult& suite, ResidualReport rep) {
  suite.reports.push_back(std::move(rep));
}

StateSpec perturbed(StateSpec s, double inject, const SystemParams& params) {
  s.energy += inject * params.hbar * params.omega;
  return s;
}

void suite_oscillator_core(const RunConfig& cfg, SuiteResult& out) {
  const SystemParams params = cfg.system();
  const Grid grid3 = make_grid(cfg.extent, cfg.h, 3);
  const PotentialSpec pot = oscillator_potential(params);
  const ReferenceState ref = ground_state(params);
  const double inject = cfg.inject_energy_error;

  const QuantumNumbers picks[] = {{0, 0, 0}, {1, 0, 0}, {2, 1, 0}};
  for (const auto& l : picks) {
    const StateSpec s = perturbed(eigenstate(l, params), inject, params);
    append(out, residual_relative(s, pot, params, grid3, cfg.order,
                                  cfg.tol_analytic));
  }
  append(out, residual_reference(ref, pot, params, grid3, cfg.order,
                                 cfg.tol_analytic));
  for (const auto& l : picks) {
    const StateSpec s = perturbed(eigenstate(l, params), inject, params);
    append(out, residual_entangled(s, ref, params, grid3, cfg.order,
                                   cfg.tol_analytic));
  }

  const double E_n = energy_of(0, params);
  const Vec3 P{1.0, 0.0, 0.0};
  const double E_total = E_n + norm2(P) / (2.0 * params.m_c);
  append(out, residual_com(P, E_total, E_n, params, make_grid(4.0, cfg.h, 3),
                           cfg.order, cfg.tol_analytic));

  append(out, residual_time(eigenstate({0, 0, 0}, params), E_n, ref, 0.01, 1.0,
                            cfg.order, cfg.tol_strict));
  append(out, coordinate_independence_check(ref, params, grid3, cfg.order,
                                            cfg.tol_strict));

  {
    // holomorphy of the world-time phase: Laplace form and first-order pair
    const Grid tg = make_grid(1.0, 0.01, 1);
    HolomorphyProbe probe;
    probe.f = [&](Complex s) {
      return std::exp(Complex(0.0, -1.0) * E_n * s / params.hbar);
    };
    probe.t_grid = tg;
    probe.tau_grid = tg;
    probe.label = "exp";
    const ResidualReport lap =
        cr_residual(probe, CrForm::Laplace, cfg.tol_strict, cfg.order);
    const ResidualReport pair =
        cr_residual(probe, CrForm::Pair, cfg.tol_strict, cfg.order);
    ResidualReport combined;
    combined.check_name = "holomorphy-exp";
    combined.grid_h = tg.spacing;
    combined.grid_extent = tg.extent;
    combined.residual_rms = std::max(lap.residual_rms, pair.residual_rms);
    combined.residual_max = std::max(lap.residual_max, pair.residual_max);
    combined.tolerance = cfg.tol_strict;
    append(out, finish_report(combined));
  }

  {
    const TauNormalization norm = cfg.tau_normalization == "drop"
                                      ? TauNormalization::Drop
                                      : TauNormalization::Keep;
    const Grid small = make_grid(3.0, 0.1, 3);
    const RatioStats stats =
        consistency_ratio({1, 0, 0}, small, 0.3, params, norm);
    const double alpha = params.m_r * params.omega / (M_PI * params.hbar);
    const double expected =
        norm == TauNormalization::Keep ? std::pow(alpha, 0.75) : 1.0;
    ResidualReport rep;
    rep.check_name = "map-consistency";
    rep.grid_h = small.spacing;
    rep.grid_extent = small.extent;
    rep.n = 1;
    rep.residual_rms = stats.rel_spread;
    rep.residual_max = std::abs(stats.mean - expected) / expected;
    rep.tolerance = cfg.tol_strict;
    append(out, finish_report(rep));
  }
}

void suite_oscillator_full(const RunConfig& cfg, SuiteResult& out) {
  const SystemParams params = cfg.system();
  const Grid grid3 = make_grid(cfg.extent, cfg.h, 3);
  const PotentialSpec pot = oscillator_potential(params);
  const ReferenceState ref = ground_state(params);
  const double inject = cfg.inject_energy_error;

  append(out, residual_reference(ref, pot, params, grid3, cfg.order,
                                 cfg.tol_analytic));
  for (int n = 0; n <= 6; ++n) {
    for (int l1 = 0; l1 <= n; ++l1) {
      for (int l2 = 0; l2 + l1 <= n; ++l2) {
        const QuantumNumbers l{l1, l2, n - l1 - l2};
        const StateSpec s = perturbed(eigenstate(l, params), inject, params);
        append(out, residual_relative(s, pot, params, grid3, cfg.order,
                                      cfg.tol_analytic));
        append(out, residual_entangled(s, ref, params, grid3, cfg.order,
                                       cfg.tol_analytic));
      }
    }
  }
}

void suite_oracle_harmonic(const RunConfig& cfg, SuiteResult& out) {
  const SystemParams params = cfg.system();
  const Grid grid = make_grid(12.0, 0.01, 1);
  const PotentialSpec pot = oscillator_potential(params);
  const auto pairs = solve_1d(pot.axis_v, grid, params, 8);

  double worst = 0.0;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const double expected = energy_of_1d(static_cast<int>(n), params);
    worst = std::max(worst, std::abs(pairs[n].energy - expected) /
                                (params.hbar * params.omega));
  }
  ResidualReport spec_rep;
  spec_rep.check_name = "oracle-harmonic-spectrum";
  spec_rep.grid_h = grid.spacing;
  spec_rep.grid_extent = grid.extent;
  spec_rep.residual_rms = worst;
  spec_rep.residual_max = worst;
  spec_rep.tolerance = cfg.tol_oracle;
  append(out, finish_report(spec_rep));

  const ReferenceState num_ref =
      make_reference_from_numeric(pairs[0], grid, params, 1);
  const double alpha = params.m_r * params.omega / params.hbar;
  double worst_l = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.05) {
    const double L = num_ref.log_derivative({x, 0, 0})[0];
    worst_l = std::max(worst_l, std::abs(L + alpha * x));
  }
  ResidualReport lrep;
  lrep.check_name = "oracle-harmonic-logderiv";
  lrep.grid_h = grid.spacing;
  lrep.grid_extent = 4.0;
  lrep.residual_rms = worst_l;
  lrep.residual_max = worst_l;
  lrep.tolerance = 1e-3;
  append(out, finish_report(lrep));

  append(out, residual_reference(num_ref, pot, params, grid, cfg.order,
                                 cfg.tol_oracle));
}

void suite_oracle_quartic(const RunConfig& cfg, SuiteResult& out) {
  const SystemParams params = cfg.system();
  const PotentialSpec pot = quartic_potential();
  const double extent = auto_extent_1d(pot.axis_v, params, 4);
  const Grid grid = make_grid(extent, extent / 1200.0, 1);
  const auto pairs = solve_1d(pot.axis_v, grid, params, 4);

  // Sturm ordering sanity: energies increase, node counts equal the index
  bool ordered = true;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    if (pairs[j].node_count != static_cast<int>(j)) ordered = false;
    if (j > 0 && !(pairs[j].energy > pairs[j - 1].energy)) ordered = false;
  }
  ResidualReport order_rep;
  order_rep.check_name = "oracle-quartic-spectrum";
  order_rep.grid_h = grid.spacing;
  order_rep.grid_extent = grid.extent;
  order_rep.residual_rms = ordered ? 0.0 : 1.0;
  order_rep.residual_max = order_rep.residual_rms;
  order_rep.tolerance = 0.5;
  append(out, finish_report(order_rep));

  // Evaluate inside the solver box: the Dirichlet wall sits at 1.5x the
  // turning point of the highest solved state, and the lower states' tails
  // are truncated there at a level the continuum residual would see.
  const int half = (grid.points - 1) / 2;
  const Grid eval_grid =
      make_grid((3 * half / 4) * grid.spacing, grid.spacing, 1);

  const ReferenceState ref1 =
      make_reference_from_numeric(pairs[0], grid, params, 1);
  append(out, residual_reference(ref1, pot, params, eval_grid, cfg.order,
                                 cfg.tol_oracle));

  const StateSpec excited1 = numeric_state_1d(pairs[1], grid);
  append(out, residual_entangled(excited1, ref1, params, eval_grid, cfg.order,
                                 cfg.tol_oracle));

  // 3D composition: first excited along one axis against the ground
  // reference, on a stride-subsampled grid whose nodes coincide with the
  // solver's.
  const ReferenceState ref3 =
      make_reference_from_numeric(pairs[0], grid, params, 3);
  const StateSpec state3 =
      separable_compose({&pairs[1], &pairs[0], &pairs[0]}, grid, params);
  const int stride = 10;
  const Grid grid3 = make_grid(extent, grid.spacing * stride, 3);
  ResidualReport rep3 = residual_entangled(state3, ref3, params, grid3,
                                           cfg.order, cfg.tol_oracle);
  rep3.check_name = "entangled-numeric(1,0,0)-3d";
  append(out, finish_report(rep3));
}

void suite_reference_independence(const RunConfig& cfg, SuiteResult& out) {
  // An excited 1D reference restricted to a node-free subdomain: the
  // entangled equation must close with the energy offset of that reference.
  const SystemParams params = cfg.system();
  const double alpha = params.m_r * params.omega / params.hbar;
  const double shift = 2.25;  // window center; psi_1 has its node at 0

  const Grid window = make_grid(1.6, 0.0125, 1);

  ReferenceState ref;
  ref.dim = 1;
  ref.hbar = params.hbar;
  ref.source = ReferenceState::Source::ClosedForm;
  ref.label = "oscillator-excited-1d";
  ref.energy_m = energy_of_1d(1, params);
  // ln of |N x exp(-alpha x^2 / 2)| at x + shift, nodeless on the window
  ref.axis_log[0] = [alpha, shift](double u) {
    const double x = u + shift;
    return std::log(std::abs(x)) - 0.5 * alpha * x * x;
  };
  ref.axis_log_derivative[0] = [alpha, shift](double u) {
    const double x = u + shift;
    return 1.0 / x - alpha * x;
  };
  ref.peak_log = ref.axis_log[0](1.0 / std::sqrt(alpha) - shift);
  auto lg = ref.axis_log[0];
  ref.psi_I = [lg](const Vec3& x) { return std::exp(lg(x[0])); };
  auto ld = ref.axis_log_derivative[0];
  ref.log_derivative = [ld](const Vec3& x) {
    return Vec3{ld(x[0]), 0, 0};
  };

  StateSpec ground = eigenstate_1d(0, params);
  StateSpec windowed;
  windowed.dim = 1;
  windowed.qn = ground.qn;
  windowed.energy = ground.energy;
  windowed.label = "oscillator1d(0)-window";
  auto base = ground.axis_factor[0];
  windowed.axis_factor[0] = [base, shift](double u) { return base(u + shift); };
  auto wf = windowed.axis_factor[0];
  windowed.psi = [wf](const Vec3& x) { return Complex(wf(x[0]), 0.0); };

  ResidualReport rep = residual_entangled(windowed, ref, params, window,
                                          cfg.order, cfg.tol_analytic);
  rep.check_name = "entangled-excited-reference-1d";
  append(out, finish_report(rep));
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"oscillator-core", "oscillator-full",        "oracle-harmonic",
          "oracle-quartic",  "reference-independence", "all"};
}

SuiteResult run_suite(const RunConfig& cfg) {
  SuiteResult out;
  const std::string& name = cfg.suite;
  if (name == "oscillator-core") {
    suite_oscillator_core(cfg, out);
  } else if (name == "oscillator-full") {
    suite_oscillator_full(cfg, out);
  } else if (name == "oracle-harmonic") {
    suite_oracle_harmonic(cfg, out);
  } else if (name == "oracle-quartic") {
    suite_oracle_quartic(cfg, out);
  } else if (name == "reference-independence") {
    suite_reference_independence(cfg, out);
  } else if (name == "all") {
    suite_oscillator_core(cfg, out);
    suite_oscillator_full(cfg, out);
    suite_oracle_harmonic(cfg, out);
    suite_oracle_quartic(cfg, out);
    suite_reference_independence(cfg, out);
  } else if (name == "empty") {
    // intentionally no checks
  } else {
    throw UsageError("unknown suite: " + name, name);
  }
  out.aggregate_pass = aggregate_pass(out.reports);
  return out;
}

}  // namespace entverify
