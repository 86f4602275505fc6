#include "entverify/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "entverify/format.hpp"

namespace entverify {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (d, e) below lambda,
// by the Sturm sequence count.
int sturm_count(const std::vector<double>& d, double e2, double lambda) {
  int count = 0;
  const double tiny = 1e-300;
  double q = d[0] - lambda;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = -tiny;
    q = d[i] - lambda - e2 / q;
    if (q < 0.0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const std::vector<double>& d, double e, int k) {
  const double e2 = e * e;
  double lo = d[0], hi = d[0];
  for (double di : d) {
    lo = std::min(lo, di);
    hi = std::max(hi, di);
  }
  lo -= 2.0 * std::abs(e) + 1.0;
  hi += 2.0 * std::abs(e) + 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e2, mid) > k)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// Solve (T - sigma I) x = b for tridiagonal T = tridiag(e, d, e), in place.
void shifted_solve(const std::vector<double>& d, double e, double sigma,
                   std::vector<double>& x) {
  const std::size_t m = d.size();
  static thread_local std::vector<double> cp, dp;
  cp.assign(m, 0.0);
  dp.assign(m, 0.0);
  auto safe = [](double p) {
    const double tiny = 1e-150;
    if (std::abs(p) < tiny) return p < 0 ? -tiny : tiny;
    return p;
  };
  double pivot = safe(d[0] - sigma);
  cp[0] = e / pivot;
  dp[0] = x[0] / pivot;
  for (std::size_t i = 1; i < m; ++i) {
    pivot = safe(d[i] - sigma - e * cp[i - 1]);
    cp[i] = e / pivot;
    dp[i] = (x[i] - e * dp[i - 1]) / pivot;
  }
  x[m - 1] = dp[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
}

struct RawSolve {
  std::vector<double> energies;
  std::vector<std::vector<double>> vectors;  // interior values
};

RawSolve solve_interior(const std::vector<double>& v_interior, double h,
                        double kinetic, int k) {
  const std::size_t m = v_interior.size();
  std::vector<double> d(m);
  const double e = -kinetic / (h * h);
  for (std::size_t i = 0; i < m; ++i) d[i] = 2.0 * kinetic / (h * h) + v_interior[i];

  RawSolve out;
  out.energies.resize(static_cast<std::size_t>(k));
  out.vectors.resize(static_cast<std::size_t>(k));
  const double scale = 2.0 * kinetic / (h * h) +
                       *std::max_element(v_interior.begin(), v_interior.end()) -
                       *std::min_element(v_interior.begin(), v_interior.end()) + 1.0;
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  for (int j = 0; j < k; ++j) {
    const double lambda = bisect_eigenvalue(d, e, j);
    out.energies[static_cast<std::size_t>(j)] = lambda;

    std::vector<double> x(m);
    for (auto& xv : x) xv = uni(rng);
    const double sigma = lambda + 1e-11 * scale;
    bool converged = false;
    for (int iter = 0; iter < 40; ++iter) {
      shifted_solve(d, e, sigma, x);
      // orthogonalize against lower states (guards clustered levels)
      for (int p = 0; p < j; ++p) {
        const auto& y = out.vectors[static_cast<std::size_t>(p)];
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += x[i] * y[i];
        for (std::size_t i = 0; i < m; ++i) x[i] -= proj * y[i];
      }
      double norm = 0.0;
      for (double xv : x) norm += xv * xv;
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (auto& xv : x) xv /= norm;
      // residual check
      double res = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double t = (d[i] - lambda) * x[i];
        if (i > 0) t += e * x[i - 1];
        if (i + 1 < m) t += e * x[i + 1];
        res = std::max(res, std::abs(t));
      }
      if (res <= 5e-14 * scale) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericError("inverse iteration did not converge for state " +
                         std::to_string(j));
    }
    out.vectors[static_cast<std::size_t>(j)] = std::move(x);
  }
  return out;
}

int count_sign_changes(const std::vector<double>& y) {
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v));
  const double floor = 1e-8 * peak;  // ignore inverse-iteration noise tails
  int changes = 0;
  double prev = 0.0;
  for (double v : y) {
    if (std::abs(v) <= floor) continue;
    if (prev != 0.0 && ((prev > 0) != (v > 0))) ++changes;
    prev = v;
  }
  return changes;
}

}  // namespace

std::vector<EigenPair> solve_1d(const std::vector<double>& v, const Grid& grid,
                                const SystemParams& params, int k) {
  if (grid.dim != 1) throw DomainError("solver grid must be 1D");
  if (k < 1 || k > 12) throw DomainError("state count must be in [1, 12]");
  if (v.size() != static_cast<std::size_t>(grid.points)) {
    throw DomainError("potential sample count does not match the grid");
  }
  if (grid.points < 2 * k + 5) throw DomainError("grid too coarse for k states");
  const double kinetic = params.hbar * params.hbar / (2.0 * params.m_r);

  const std::vector<double> v_int(v.begin() + 1, v.end() - 1);
  RawSolve fine = solve_interior(v_int, grid.spacing, kinetic, k);

  // Richardson refinement from the half-resolution grid (every other node).
  std::vector<double> refined = fine.energies;
  const int coarse_points = (grid.points + 1) / 2;
  if (coarse_points >= std::max(7, 2 * k + 5)) {
    std::vector<double> v_coarse;
    v_coarse.reserve(static_cast<std::size_t>(coarse_points) - 2);
    for (int i = 2; i < grid.points - 1; i += 2) v_coarse.push_back(v[static_cast<std::size_t>(i)]);
    RawSolve coarse =
        solve_interior(v_coarse, 2.0 * grid.spacing, kinetic, k);
    for (int j = 0; j < k; ++j) {
      refined[static_cast<std::size_t>(j)] =
          (4.0 * fine.energies[static_cast<std::size_t>(j)] -
           coarse.energies[static_cast<std::size_t>(j)]) /
          3.0;
    }
  }

  std::vector<EigenPair> out(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    EigenPair& p = out[static_cast<std::size_t>(j)];
    p.energy_raw = fine.energies[static_cast<std::size_t>(j)];
    p.energy = refined[static_cast<std::size_t>(j)];
    p.wavefunction.assign(static_cast<std::size_t>(grid.points), 0.0);
    const auto& x = fine.vectors[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < x.size(); ++i) p.wavefunction[i + 1] = x[i];
    // grid-quadrature normalization (endpoints are zero)
    double norm2 = 0.0;
    for (double w : p.wavefunction) norm2 += w * w;
    const double norm = std::sqrt(norm2 * grid.spacing);
    // deterministic sign: largest-magnitude sample positive
    double peak = 0.0;
    for (double w : p.wavefunction)
      if (std::abs(w) > std::abs(peak)) peak = w;
    const double s = (peak < 0 ? -1.0 : 1.0) / norm;
    for (auto& w : p.wavefunction) w *= s;
    p.node_count = count_sign_changes(p.wavefunction);
  }
  return out;
}

std::vector<EigenPair> solve_1d(const AxisFn& v, const Grid& grid,
                                const SystemParams& params, int k) {
  std::vector<double> samples(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i)
    samples[static_cast<std::size_t>(i)] = v(grid.axis[static_cast<std::size_t>(i)]);
  return solve_1d(samples, grid, params, k);
}

double auto_extent_1d(const AxisFn& v, const SystemParams& params, int k) {
  double extent = 10.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const int half = 400;
    Grid trial = make_grid(extent, extent / half, 1);
    const auto pairs = solve_1d(v, trial, params, k);
    const double e_top = pairs.back().energy;
    // outermost classical turning point of the highest state
    double x_t = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = 2.0 * extent * static_cast<double>(i) / 4000.0;
      if (v(x) <= e_top || v(-x) <= e_top) x_t = std::max(x_t, x);
    }
    // decay allowance: walk outward until the barrier integral guarantees
    // the tail is below discretization error; shallow wells (small k) need
    // more than the bare 1.5x turning-point rule
    const double kappa_budget = 18.0;
    double x_decay = x_t;
    double integral = 0.0;
    const double step = std::max(1e-3, x_t * 1e-3);
    while (integral < kappa_budget && x_decay < 4.0 * extent) {
      const double vx = std::min(v(x_decay), v(-x_decay));
      if (vx > e_top) {
        integral +=
            std::sqrt(2.0 * params.m_r * (vx - e_top)) / params.hbar * step;
      }
      x_decay += step;
    }
    const double want = std::max(1.5 * x_t, x_decay);
    if (want <= extent) {
      return std::ceil(want * 10.0) / 10.0;
    }
    extent = 2.0 * want;
  }
  throw NumericError("auto extent did not stabilize");
}

namespace {

// Piecewise-linear interpolation with linear extension beyond the ends.
struct LinearTable {
  std::vector<double> x, y;
  double operator()(double xv) const {
    const std::size_t n = x.size();
    if (xv <= x.front()) {
      const double slope = (y[1] - y[0]) / (x[1] - x[0]);
      return y[0] + slope * (xv - x[0]);
    }
    if (xv >= x.back()) {
      const double slope = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
      return y[n - 1] + slope * (xv - x[n - 1]);
    }
    const auto it = std::upper_bound(x.begin(), x.end(), xv);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double w = (xv - x[i]) / (x[i + 1] - x[i]);
    return y[i] + w * (y[i + 1] - y[i]);
  }
};

}  // namespace

ReferenceState make_reference_from_numeric(const EigenPair& ground,
                                           const Grid& grid,
                                           const SystemParams& params,
                                           int dim) {
  if (grid.dim != 1) throw DomainError("numeric references are built per axis");
  if (ground.node_count != 0) {
    throw DomainError("reference state must be nodeless");
  }
  if (dim != 1 && dim != 3) throw DomainError("dim must be 1 or 3");

  // clip to the contiguous region above the node threshold
  int lo = 0, hi = grid.points - 1;
  const auto& w = ground.wavefunction;
  while (lo < grid.points && std::abs(w[static_cast<std::size_t>(lo)]) < kNodeEpsilon) ++lo;
  while (hi >= 0 && std::abs(w[static_cast<std::size_t>(hi)]) < kNodeEpsilon) --hi;
  if (hi - lo < 7) throw DomainError("reference support too small");

  LinearTable log_table;
  for (int i = lo; i <= hi; ++i) {
    log_table.x.push_back(grid.axis[static_cast<std::size_t>(i)]);
    log_table.y.push_back(std::log(std::abs(w[static_cast<std::size_t>(i)])));
  }
  // log-derivative by central differences of ln|psi| on the solver grid
  LinearTable deriv_table;
  deriv_table.x = log_table.x;
  deriv_table.y.resize(log_table.y.size());
  const double h = grid.spacing;
  const std::size_t m = log_table.y.size();
  deriv_table.y[0] = (log_table.y[1] - log_table.y[0]) / h;
  for (std::size_t i = 1; i + 1 < m; ++i)
    deriv_table.y[i] = (log_table.y[i + 1] - log_table.y[i - 1]) / (2.0 * h);
  deriv_table.y[m - 1] = (log_table.y[m - 1] - log_table.y[m - 2]) / h;

  const double peak_axis =
      *std::max_element(log_table.y.begin(), log_table.y.end());

  ReferenceState r;
  r.dim = dim;
  r.hbar = params.hbar;
  r.source = ReferenceState::Source::Numeric;
  r.label = dim == 3 ? "numeric-ground" : "numeric-ground-1d";
  r.energy_m = static_cast<double>(dim) * ground.energy;
  r.peak_log = static_cast<double>(dim) * peak_axis;
  for (int a = 0; a < dim; ++a) {
    r.axis_log[a] = log_table;
    r.axis_log_derivative[a] = deriv_table;
  }
  r.psi_I = [log_table, dim](const Vec3& x) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += log_table(x[a]);
    return std::exp(s);
  };
  r.log_derivative = [deriv_table, dim](const Vec3& x) {
    Vec3 L{0, 0, 0};
    for (int a = 0; a < dim; ++a) L[a] = deriv_table(x[a]);
    return L;
  };
  return r;
}

StateSpec separable_compose(const std::array<const EigenPair*, 3>& axis_states,
                            const Grid& grid, const SystemParams& params) {
  (void)params;
  if (grid.dim != 1) throw DomainError("axis states live on a 1D grid");
  for (const EigenPair* p : axis_states) {
    if (p == nullptr) throw DomainError("missing axis state");
    if (p->wavefunction.size() != static_cast<std::size_t>(grid.points)) {
      throw DomainError("axis state grid mismatch");
    }
  }
  StateSpec s;
  s.dim = 3;
  s.qn = QuantumNumbers{axis_states[0]->node_count, axis_states[1]->node_count,
                        axis_states[2]->node_count};
  s.energy = axis_states[0]->energy + axis_states[1]->energy +
             axis_states[2]->energy;
  s.label = "numeric(" + std::to_string(s.qn.l1) + "," +
            std::to_string(s.qn.l2) + "," + std::to_string(s.qn.l3) + ")";
  for (int a = 0; a < 3; ++a) {
    LinearTable t;
    t.x.assign(grid.axis.begin(), grid.axis.end());
    t.y = axis_states[static_cast<std::size_t>(a)]->wavefunction;
    s.axis_factor[a] = t;
  }
  auto f = s.axis_factor;
  s.psi = [f](const Vec3& x) {
    return Complex(f[0](x[0]) * f[1](x[1]) * f[2](x[2]), 0.0);
  };
  return s;
}

StateSpec numeric_state_1d(const EigenPair& pair, const Grid& grid) {
  if (grid.dim != 1) throw DomainError("axis states live on a 1D grid");
  if (pair.wavefunction.size() != static_cast<std::size_t>(grid.points)) {
    throw DomainError("axis state grid mismatch");
  }
  StateSpec s;
  s.dim = 1;
  s.qn = QuantumNumbers{pair.node_count, 0, 0};
  s.energy = pair.energy;
  s.label = "numeric1d(" + std::to_string(pair.node_count) + ")";
  LinearTable t;
  t.x.assign(grid.axis.begin(), grid.axis.end());
  t.y = pair.wavefunction;
  s.axis_factor[0] = t;
  auto f = s.axis_factor[0];
  s.psi = [f](const Vec3& x) { return Complex(f(x[0]), 0.0); };
  return s;
}

void write_eigenpair_csv(std::ostream& os, const EigenPair& pair,
                         const Grid& grid) {
  os << "energy," << format_double(pair.energy) << '\n';
  os << "x,psi\n";
  for (int i = 0; i < grid.points; ++i) {
    os << format_double(grid.axis[static_cast<std::size_t>(i)]) << ','
       << format_double(pair.wavefunction[static_cast<std::size_t>(i)]) << '\n';
  }
}

}  // namespace entverify
