// entverify command-line front end: suite execution, field exports, the
// eigensolver, and holomorphy probes. Exit codes: 0 all checks pass,
// 1 any check failed, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "entverify/config.hpp"
#include "entverify/diffcalc.hpp"
#include "entverify/entangle.hpp"
#include "entverify/format.hpp"
#include "entverify/oscillator.hpp"
#include "entverify/report.hpp"
#include "entverify/residuals.hpp"
#include "entverify/spectral.hpp"

namespace {

using namespace entverify;

std::string read_file(const std::string& path) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs) throw UsageError("cannot read config file: " + path, path);
  std::stringstream ss;
  ss << ifs.rdbuf();
  return ss.str();
}

// Writes through a stringstream so the output file is created only on
// success and written in one piece.
int emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream ofs(out_path, std::ios::binary | std::ios::trunc);
  if (!ofs) {
    std::cerr << "error: cannot open output path: " << out_path << "\n";
    return 2;
  }
  ofs << payload;
  return 0;
}

PotentialSpec potential_from_config(const RunConfig& cfg,
                                    const SystemParams& params) {
  if (cfg.potential == "oscillator") return oscillator_potential(params);
  if (cfg.potential == "quartic") return quartic_potential();
  if (cfg.potential_file.empty()) {
    throw UsageError("potential=file needs potential_file", "potential_file");
  }
  std::ifstream ifs(cfg.potential_file);
  if (!ifs) {
    throw UsageError("cannot read potential file: " + cfg.potential_file,
                     cfg.potential_file);
  }
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(ifs, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("x,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw UsageError("potential file line is not x,v: " + line, line);
    }
    xs.push_back(std::stod(a));
    vs.push_back(std::stod(b));
  }
  return tabulated_potential(xs, vs, "file:" + cfg.potential_file);
}

Grid solver_grid(const RunConfig& cfg, const SystemParams& params,
                 const PotentialSpec& pot) {
  const double extent = cfg.is_explicit("extent")
                            ? cfg.extent
                            : auto_extent_1d(pot.axis_v, params, cfg.states);
  const double h = cfg.is_explicit("h") ? cfg.h : extent / 1200.0;
  return make_grid(extent, h, 1);
}

ReferenceState reference_from_config(const RunConfig& cfg,
                                     const SystemParams& params, int dim) {
  if (cfg.ref == "ground") {
    return dim == 3 ? ground_state(params) : ground_state_1d(params);
  }
  const PotentialSpec pot = potential_from_config(cfg, params);
  const Grid grid = solver_grid(cfg, params, pot);
  const auto pairs = solve_1d(pot.axis_v, grid, params, 1);
  return make_reference_from_numeric(pairs[0], grid, params, dim);
}

int cmd_verify(const RunConfig& cfg) {
  const SuiteResult result = run_suite(cfg);
  std::stringstream payload;
  if (cfg.format == "json") {
    write_reports_json(payload, result.reports, cfg.system());
  } else {
    write_reports_csv(payload, result.reports);
  }
  const int io = emit(cfg.out, payload.str());
  if (io != 0) return io;
  return result.aggregate_pass ? 0 : 1;
}

int cmd_map(const RunConfig& cfg) {
  const SystemParams params = cfg.system();
  // plot-ready 1D track along the first axis through the full reference
  const Grid grid = make_grid(cfg.extent, cfg.h, 1);
  const ReferenceState ref = reference_from_config(cfg, params, cfg.dim);
  const QuantumNumbers l{cfg.l1, cfg.l2, cfg.l3};
  const double E = energy_of(l.n(), params);
  const TauNormalization norm = cfg.tau_normalization == "drop"
                                    ? TauNormalization::Drop
                                    : TauNormalization::Keep;
  std::stringstream payload;
  write_tau_field_csv(payload, ref, E, grid, norm);
  return emit(cfg.out, payload.str());
}

int cmd_ladder(const RunConfig& cfg) {
  const SystemParams params = cfg.system();
  const Grid grid = make_grid(6.0, 0.02, 1);
  const ReferenceState ref = ground_state_1d(params);
  std::stringstream payload;
  payload << "l,direction,coefficient,expected,abs_error,orthogonal_residual\n";
  const int l_max = std::min(std::max(4, cfg.l1), 8);
  for (int l = 0; l <= l_max; ++l) {
    const StateSpec state = eigenstate_1d(l, params);
    for (const auto dir : {LadderDirection::Lower, LadderDirection::Raise}) {
      const LadderResult r =
          ladder_apply(state, ref, 0, dir, params, grid, cfg.order);
      const double expected =
          dir == LadderDirection::Lower
              ? std::sqrt(static_cast<double>(l))
              : std::sqrt(static_cast<double>(l) + 1.0);
      payload << l << ','
              << (dir == LadderDirection::Lower ? "lower" : "raise") << ','
              << format_double(r.coefficient) << ',' << format_double(expected)
              << ',' << format_double(std::abs(r.coefficient - expected)) << ','
              << format_double(r.orthogonal_residual) << '\n';
    }
  }
  return emit(cfg.out, payload.str());
}

int cmd_solve(const RunConfig& cfg) {
  const SystemParams params = cfg.system();
  const PotentialSpec pot = potential_from_config(cfg, params);
  const Grid grid = solver_grid(cfg, params, pot);
  const auto pairs = solve_1d(pot.axis_v, grid, params, cfg.states);
  std::stringstream payload;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) payload << '\n';
    write_eigenpair_csv(payload, pairs[i], grid);
  }
  return emit(cfg.out, payload.str());
}

int cmd_cr_check(const RunConfig& cfg) {
  const SystemParams params = cfg.system();
  const Grid tg = make_grid(1.0, 0.01, 1);
  std::vector<ResidualReport> reports;
  for (const double E : {0.5, 1.5, 3.5}) {
    HolomorphyProbe probe;
    probe.f = [E, &params](Complex s) {
      return std::exp(Complex(0.0, -1.0) * E * s / params.hbar);
    };
    probe.t_grid = tg;
    probe.tau_grid = tg;
    {
      std::stringstream label;
      label << "exp-E" << E;
      probe.label = label.str();
    }
    reports.push_back(
        cr_residual(probe, CrForm::Laplace, cfg.tol_strict, cfg.order));
    reports.push_back(
        cr_residual(probe, CrForm::Pair, cfg.tol_strict, cfg.order));
  }
  // negative control: conj(s) satisfies the Laplace form but must be
  // flagged by the first-order pair
  HolomorphyProbe conj_probe;
  conj_probe.f = [](Complex s) { return std::conj(s); };
  conj_probe.t_grid = tg;
  conj_probe.tau_grid = tg;
  conj_probe.label = "conj";
  reports.push_back(
      cr_residual(conj_probe, CrForm::Laplace, cfg.tol_strict, cfg.order));
  const ResidualReport conj_pair =
      cr_residual(conj_probe, CrForm::Pair, cfg.tol_strict, cfg.order);
  ResidualReport detection;
  detection.check_name = "cr-pair-conj-detects-antiholomorphic";
  detection.grid_h = tg.spacing;
  detection.grid_extent = tg.extent;
  detection.residual_rms =
      conj_pair.residual_rms > 1e3 * cfg.tol_strict ? 0.0 : 1.0;
  detection.residual_max = conj_pair.residual_rms;
  detection.tolerance = 0.5;
  reports.push_back(finish_report(detection));

  std::stringstream payload;
  if (cfg.format == "json") {
    write_reports_json(payload, reports, params);
  } else {
    write_reports_csv(payload, reports);
  }
  const int io = emit(cfg.out, payload.str());
  if (io != 0) return io;
  return aggregate_pass(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args) {
    if (a == "--help" || a == "-h" || a == "help") {
      std::cout << help_text();
      return 0;
    }
  }
  if (args.empty()) {
    std::cerr << "usage: entverify <verify|map|ladder|solve|cr-check> [flags]\n"
              << "       entverify --help\n";
    return 2;
  }

  const std::string cmd = args[0];
  try {
    std::string file_contents;
    std::vector<std::string> flags;
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--config") {
        if (i + 1 >= args.size())
          throw UsageError("--config needs a path", "--config");
        file_contents = read_file(args[++i]);
      } else {
        flags.push_back(args[i]);
      }
    }
    const RunConfig cfg = parse_config(file_contents, flags);

    if (cmd == "verify") return cmd_verify(cfg);
    if (cmd == "map") return cmd_map(cfg);
    if (cmd == "ladder") return cmd_ladder(cfg);
    if (cmd == "solve") return cmd_solve(cfg);
    if (cmd == "cr-check") return cmd_cr_check(cfg);
    throw UsageError("unknown subcommand: " + cmd, cmd);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
