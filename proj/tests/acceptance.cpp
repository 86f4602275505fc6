// Acceptance suite: one line per criterion, strict tolerances, measured
// wall time. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entverify/diffcalc.hpp"
#include "entverify/entangle.hpp"
#include "entverify/oscillator.hpp"
#include "entverify/residuals.hpp"
#include "entverify/spectral.hpp"

using namespace entverify;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double elapsed) {
  std::printf("[%s] %2d. %-28s %s (%.2f s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str(), elapsed);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream ifs(path, std::ios::binary);
  std::stringstream ss;
  ss << ifs.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CLI_BINARY_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<QuantumNumbers> states_up_to(int n_max) {
  std::vector<QuantumNumbers> out;
  for (int n = 0; n <= n_max; ++n)
    for (int l1 = 0; l1 <= n; ++l1)
      for (int l2 = 0; l2 + l1 <= n; ++l2) out.push_back({l1, l2, n - l1 - l2});
  return out;
}

// 1. E_n = hbar w (3/2 + n), exact in integer-scaled arithmetic, n <= 20.
void criterion_energy_spectrum() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  bool pass = true;
  for (int n = 0; n <= 20; ++n) {
    if (2.0 * energy_of(n, p) != static_cast<double>(2 * n + 3)) pass = false;
  }
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "n <= 20 exact, " << dt * 1e3 << " ms";
  report(1, "energy spectrum", pass && dt < 1e-3, detail.str(), dt);
}

// 2. Relative equation for every eigenstate with n <= 6 at 1e-6.
void criterion_relative_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  const Grid grid = make_grid(8.0, 0.05, 3);
  const PotentialSpec pot = oscillator_potential(p);
  double worst = 0.0;
  std::string worst_label;
  int count = 0;
  for (const auto& l : states_up_to(6)) {
    const ResidualReport r =
        residual_relative(eigenstate(l, p), pot, p, grid, 4, 1e-6);
    ++count;
    if (r.residual_rms > worst) {
      worst = r.residual_rms;
      worst_label = r.check_name;
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << count << " states, worst rms " << worst << " (" << worst_label
         << "), tol 1e-6";
  report(2, "relative-equation residual", worst <= 1e-6 && dt < 10.0,
         detail.str(), dt);
}

// 3. Entangled equation, no potential anywhere in the path, same sweep.
void criterion_potential_elimination() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  const Grid grid = make_grid(8.0, 0.05, 3);
  const ReferenceState ref = ground_state(p);
  double worst = 0.0;
  std::string worst_label;
  int count = 0;
  for (const auto& l : states_up_to(6)) {
    const ResidualReport r =
        residual_entangled(eigenstate(l, p), ref, p, grid, 4, 1e-6);
    ++count;
    if (r.residual_rms > worst) {
      worst = r.residual_rms;
      worst_label = r.check_name;
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << count << " states vs ground reference, worst rms " << worst
         << " (" << worst_label << "), tol 1e-6";
  report(3, "potential elimination", worst <= 1e-6 && dt < 10.0, detail.str(),
         dt);
}

// 4. Mixed-derivative routes agree and converge at order >= 3.5.
void criterion_mixed_routes() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  const ReferenceState ref = ground_state(p);
  const StateSpec s = eigenstate({2, 0, 0}, p);
  std::vector<double> disc;
  for (const double h : {0.1, 0.05, 0.025}) {
    disc.push_back(mixed_route_discrepancy(s, ref, make_grid(6.0, h, 3), 4));
  }
  const double order1 = std::log2(disc[0] / disc[1]);
  const double order2 = std::log2(disc[1] / disc[2]);
  const bool pass =
      disc[1] <= 1e-6 && disc[2] <= 1e-6 && order1 >= 3.5 && order2 >= 3.5;
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "disc(h)=" << disc[0] << "/" << disc[1] << "/" << disc[2]
         << ", orders " << order1 << ", " << order2;
  report(4, "mixed-derivative identity", pass, detail.str(), dt);
}

// 5. Ladder algebra: coefficients, number operator, ground annihilation.
void criterion_ladder_algebra() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  const Grid g1 = make_grid(6.0, 0.02, 1);
  const ReferenceState ref1 = ground_state_1d(p);
  bool pass = true;
  double worst_coeff = 0.0;
  for (int l = 0; l <= 4; ++l) {
    const StateSpec s = eigenstate_1d(l, p);
    if (l > 0) {
      const LadderResult down =
          ladder_apply(s, ref1, 0, LadderDirection::Lower, p, g1);
      worst_coeff = std::max(
          worst_coeff, std::abs(down.coefficient - std::sqrt(double(l))));
    }
    const LadderResult up =
        ladder_apply(s, ref1, 0, LadderDirection::Raise, p, g1);
    worst_coeff = std::max(
        worst_coeff, std::abs(up.coefficient - std::sqrt(double(l) + 1.0)));
  }
  if (worst_coeff > 1e-6) pass = false;

  const LadderResult annihilate = ladder_apply(
      eigenstate_1d(0, p), ref1, 0, LadderDirection::Lower, p, g1);
  const bool zero_ok = annihilate.orthogonal_residual <= 1e-8;
  if (!zero_ok) pass = false;

  const Grid g3 = make_grid(8.0, 0.02, 3);
  const ReferenceState ref3 = ground_state(p);
  double worst_energy = 0.0, worst_resid = 0.0;
  for (const QuantumNumbers l :
       {QuantumNumbers{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {2, 1, 1}}) {
    const StateSpec s = eigenstate(l, p);
    const NumberOpResult r = number_operator_check(s, ref3, p, g3);
    const double scale = std::max(s.energy, p.hbar * p.omega);
    worst_energy =
        std::max(worst_energy, std::abs(r.lhs_energy - s.energy) / scale);
    worst_resid = std::max(worst_resid, r.residual);
  }
  if (worst_energy > 1e-6 || worst_resid > 1e-6) pass = false;

  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "coeff err " << worst_coeff << ", zero-field "
         << annihilate.orthogonal_residual << ", number-op err "
         << worst_energy << " resid " << worst_resid;
  report(5, "ladder algebra", pass, detail.str(), dt);
}

// 6. Holomorphy: the phase passes both forms; conj(s) trips the pair form.
void criterion_holomorphy() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid tg = make_grid(1.0, 0.01, 1);
  bool pass = true;
  double worst = 0.0;
  for (const double E : {0.5, 1.5, 3.5}) {
    HolomorphyProbe probe;
    probe.f = [E](Complex s) { return std::exp(Complex(0, -1) * E * s); };
    probe.t_grid = tg;
    probe.tau_grid = tg;
    const ResidualReport lap = cr_residual(probe, CrForm::Laplace, 1e-8);
    const ResidualReport pair = cr_residual(probe, CrForm::Pair, 1e-8);
    worst = std::max({worst, lap.residual_rms, pair.residual_rms});
    if (!lap.pass || !pair.pass) pass = false;
  }
  HolomorphyProbe conj;
  conj.f = [](Complex s) { return std::conj(s); };
  conj.t_grid = tg;
  conj.tau_grid = tg;
  const ResidualReport conj_pair = cr_residual(conj, CrForm::Pair, 1e-8);
  const bool flagged = conj_pair.residual_rms > 0.1;
  if (!flagged) pass = false;

  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "worst analytic rms " << worst << ", conj pair rms "
         << conj_pair.residual_rms << " (flagged)";
  report(6, "holomorphy checks", pass, detail.str(), dt);
}

// 7. Map consistency: flat ratio; the constant follows the normalization
// choice exactly.
void criterion_map_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(2, 2, 1, 1);  // m_r = 1
  const Grid grid = make_grid(3.0, 0.1, 3);
  const double expected_keep =
      std::pow(p.m_r * p.omega / (M_PI * p.hbar), 0.75);

  const RatioStats keep =
      consistency_ratio({0, 0, 0}, grid, 0.3, p, TauNormalization::Keep);
  const RatioStats drop =
      consistency_ratio({0, 0, 0}, grid, 0.3, p, TauNormalization::Drop);
  const bool pass = keep.rel_spread <= 1e-8 && drop.rel_spread <= 1e-8 &&
                    std::abs(keep.mean.real() - expected_keep) <= 1e-8 &&
                    std::abs(keep.mean.imag()) <= 1e-8 &&
                    std::abs(drop.mean.real() - 1.0) <= 1e-8;
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "spread keep " << keep.rel_spread << " drop " << drop.rel_spread
         << "; keep constant " << keep.mean.real() << " vs " << expected_keep
         << ", drop " << drop.mean.real();
  report(7, "map consistency", pass, detail.str(), dt);
}

// 8. Oracle extension: harmonic spectrum to 1e-4 and the quartic
// potential-free residual at 1e-4.
void criterion_oracle_extension() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  bool pass = true;

  const Grid gh = make_grid(12.0, 0.01, 1);
  const auto harmonic =
      solve_1d(oscillator_potential(p).axis_v, gh, p, 8);
  double worst_e = 0.0;
  for (std::size_t n = 0; n < harmonic.size(); ++n) {
    worst_e = std::max(worst_e, std::abs(harmonic[n].energy -
                                         (static_cast<double>(n) + 0.5)));
  }
  if (worst_e > 1e-4) pass = false;

  const double extent = auto_extent_1d(quartic_potential().axis_v, p, 4);
  const Grid gq = make_grid(extent, extent / 1200.0, 1);
  const auto quartic = solve_1d(quartic_potential().axis_v, gq, p, 4);
  const int half = (gq.points - 1) / 2;
  const Grid eval = make_grid((3 * half / 4) * gq.spacing, gq.spacing, 1);
  const ReferenceState ref1 = make_reference_from_numeric(quartic[0], gq, p, 1);
  const ResidualReport e1 = residual_entangled(
      numeric_state_1d(quartic[1], gq), ref1, p, eval, 4, 1e-4);
  const ReferenceState ref3 = make_reference_from_numeric(quartic[0], gq, p, 3);
  const StateSpec s3 =
      separable_compose({&quartic[1], &quartic[0], &quartic[0]}, gq, p);
  const Grid g3 = make_grid(extent, gq.spacing * 10, 3);
  const ResidualReport e3 = residual_entangled(s3, ref3, p, g3, 4, 1e-4);
  if (!e1.pass || !e3.pass) pass = false;

  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "harmonic worst |dE| " << worst_e << "; quartic entangled rms 1d "
         << e1.residual_rms << ", 3d " << e3.residual_rms << ", tol 1e-4";
  report(8, "oracle extension", pass && dt < 30.0, detail.str(), dt);
}

// 9. The explicit energy route through the entangled derivative cancels.
void criterion_energy_cancellation() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = make_system(1, 1, 1, 1);
  double worst = 0.0;
  {
    const Grid g = make_grid(8.0, 0.05, 1);
    const ReferenceState ref = ground_state_1d(p);
    const StateSpec s = eigenstate_1d(1, p);
    std::vector<ComplexField> fields;
    for (const double E : {1.5, 3.5, 7.5})
      fields.push_back(d_dz(s, ref, 0, g, 4, E));
    for (std::size_t a = 0; a < fields.size(); ++a) {
      for (std::size_t b = a + 1; b < fields.size(); ++b) {
        for (std::size_t i = 0; i < fields[a].values.size(); ++i) {
          const Complex d = fields[a].values[i] - fields[b].values[i];
          if (std::isfinite(d.real()) && std::isfinite(d.imag()))
            worst = std::max(worst, std::abs(d));
        }
      }
    }
  }
  {
    const Grid g = make_grid(4.0, 0.1, 3);
    const ReferenceState ref = ground_state(p);
    const StateSpec s = eigenstate({1, 1, 0}, p);
    const ComplexField base = d_dz(s, ref, 1, g, 4, 1.5);
    for (const double E : {3.5, 7.5}) {
      const ComplexField other = d_dz(s, ref, 1, g, 4, E);
      for (std::size_t i = 0; i < base.values.size(); ++i) {
        const Complex d = base.values[i] - other.values[i];
        if (std::isfinite(d.real()) && std::isfinite(d.imag()))
          worst = std::max(worst, std::abs(d));
      }
    }
  }
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "max field difference " << worst << " across E in {1.5,3.5,7.5}";
  report(9, "energy-route cancellation", worst <= 1e-12, detail.str(), dt);
}

// 10. Byte-identical reports for identical configs; fault injection exits 1.
void criterion_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  const std::string flags =
      "verify --suite oscillator-core --format json --out ";
  if (run_cli(flags + "acc_det_a.json") != 0) pass = false;
  if (run_cli(flags + "acc_det_b.json") != 0) pass = false;
  const std::string a = slurp("acc_det_a.json");
  const std::string b = slurp("acc_det_b.json");
  if (a.empty() || a != b) pass = false;
  std::remove("acc_det_a.json");
  std::remove("acc_det_b.json");

  const int inject = run_cli(
      "verify --suite oscillator-core --inject-energy-error 0.1 --out "
      "acc_inject.csv");
  if (inject != 1) pass = false;
  std::remove("acc_inject.csv");

  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "report bytes " << a.size() << " identical; injected error exit "
         << inject;
  report(10, "determinism and honesty", pass, detail.str(), dt);
}

}  // namespace

int main() {
  std::printf("acceptance suite (natural units, order-4 stencils)\n");
  criterion_energy_spectrum();
  criterion_relative_sweep();
  criterion_potential_elimination();
  criterion_mixed_routes();
  criterion_ladder_algebra();
  criterion_holomorphy();
  criterion_map_consistency();
  criterion_oracle_extension();
  criterion_energy_cancellation();
  criterion_determinism();
  if (g_failures == 0) {
    std::printf("all criteria satisfied\n");
  } else {
    std::printf("%d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
