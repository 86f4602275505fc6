#include "entverify/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace entverify {

SystemParams RunConfig::system() const {
  return make_system(m1, m2, hbar, omega);
}

bool RunConfig::is_explicit(const std::string& key) const {
  return std::find(explicit_keys.begin(), explicit_keys.end(), key) !=
         explicit_keys.end();
}

namespace {

double parse_number(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw UsageError("malformed value for " + key + ": " + value, value);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_number(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw UsageError("value for " + key + " must be an integer: " + value,
                     value);
  }
  return i;
}

void parse_l_triple(RunConfig& cfg, const std::string& value) {
  std::stringstream ss(value);
  std::string item;
  int vals[3];
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, item, ',')) {
      throw UsageError("l must be three comma-separated integers: " + value,
                       value);
    }
    vals[i] = parse_int("l", item);
    if (vals[i] < 0) throw UsageError("l components must be non-negative", value);
  }
  if (std::getline(ss, item, ',')) {
    throw UsageError("l must be three comma-separated integers: " + value,
                     value);
  }
  cfg.l1 = vals[0];
  cfg.l2 = vals[1];
  cfg.l3 = vals[2];
}

void check_choice(const std::string& key, const std::string& value,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  throw UsageError("invalid value for " + key + ": " + value, value);
}

void apply_key(RunConfig& cfg, const std::string& key,
               const std::string& value) {
  if (key == "m1") {
    cfg.m1 = parse_number(key, value);
  } else if (key == "m2") {
    cfg.m2 = parse_number(key, value);
  } else if (key == "hbar") {
    cfg.hbar = parse_number(key, value);
  } else if (key == "omega") {
    cfg.omega = parse_number(key, value);
  } else if (key == "h") {
    cfg.h = parse_number(key, value);
  } else if (key == "extent") {
    cfg.extent = parse_number(key, value);
  } else if (key == "order") {
    cfg.order = parse_int(key, value);
    if (cfg.order != 2 && cfg.order != 4)
      throw UsageError("order must be 2 or 4", value);
  } else if (key == "dim") {
    cfg.dim = parse_int(key, value);
    if (cfg.dim != 1 && cfg.dim != 3)
      throw UsageError("dim must be 1 or 3", value);
  } else if (key == "l") {
    parse_l_triple(cfg, value);
  } else if (key == "ref") {
    check_choice(key, value, {"ground", "numeric"});
    cfg.ref = value;
  } else if (key == "potential") {
    check_choice(key, value, {"oscillator", "quartic", "file"});
    cfg.potential = value;
  } else if (key == "potential_file") {
    cfg.potential_file = value;
  } else if (key == "states") {
    cfg.states = parse_int(key, value);
    if (cfg.states < 1 || cfg.states > 12)
      throw UsageError("states must be in [1, 12]", value);
  } else if (key == "suite") {
    cfg.suite = value;
  } else if (key == "tau_normalization") {
    check_choice(key, value, {"keep", "drop"});
    cfg.tau_normalization = value;
  } else if (key == "inject_energy_error") {
    cfg.inject_energy_error = parse_number(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    check_choice(key, value, {"csv", "json"});
    cfg.format = value;
  } else if (key == "tol_analytic") {
    cfg.tol_analytic = parse_number(key, value);
  } else if (key == "tol_oracle") {
    cfg.tol_oracle = parse_number(key, value);
  } else if (key == "tol_strict") {
    cfg.tol_strict = parse_number(key, value);
  } else {
    throw UsageError("unknown config key: " + key, key);
  }
  cfg.explicit_keys.push_back(key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// flag name -> config key; every flag takes one value
const std::vector<std::pair<std::string, std::string>>& flag_map() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"--m1", "m1"},
      {"--m2", "m2"},
      {"--hbar", "hbar"},
      {"--omega", "omega"},
      {"--h", "h"},
      {"--extent", "extent"},
      {"--order", "order"},
      {"--dim", "dim"},
      {"--l", "l"},
      {"--ref", "ref"},
      {"--potential", "potential"},
      {"--potential-file", "potential_file"},
      {"--states", "states"},
      {"--suite", "suite"},
      {"--tau-normalization", "tau_normalization"},
      {"--inject-energy-error", "inject_energy_error"},
      {"--out", "out"},
      {"--format", "format"},
      {"--tol-analytic", "tol_analytic"},
      {"--tol-oracle", "tol_oracle"},
      {"--tol-strict", "tol_strict"},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& file_contents,
                       const std::vector<std::string>& flags) {
  RunConfig cfg;

  std::stringstream ss(file_contents);
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line is not key=value: " + line, line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("empty config key", line);
    apply_key(cfg, key, value);
  }

  for (std::size_t i = 0; i < flags.size(); ++i) {
    const std::string& flag = flags[i];
    const auto it =
        std::find_if(flag_map().begin(), flag_map().end(),
                     [&](const auto& p) { return p.first == flag; });
    if (it == flag_map().end()) {
      throw UsageError("unknown flag: " + flag, flag);
    }
    if (i + 1 >= flags.size()) {
      throw UsageError("flag needs a value: " + flag, flag);
    }
    apply_key(cfg, it->second, flags[++i]);
  }

  if (!(cfg.h > 0) || !(cfg.extent > 0)) {
    throw UsageError("h and extent must be positive");
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_key_table() {
  return {
      {"m1", "mass of particle 1 (default 1)"},
      {"m2", "mass of particle 2 (default 1)"},
      {"hbar", "reduced Planck constant (default 1)"},
      {"omega", "oscillator angular frequency (default 1)"},
      {"h", "grid spacing (default 0.05)"},
      {"extent", "grid half-width per axis (default 8)"},
      {"order", "stencil accuracy order, 2 or 4 (default 4)"},
      {"dim", "grid dimension, 1 or 3 (default 3)"},
      {"l", "quantum numbers l1,l2,l3 (default 0,0,0)"},
      {"ref", "reference state: ground | numeric (default ground)"},
      {"potential", "potential: oscillator | quartic | file"},
      {"potential_file", "two-column CSV (x,v) for potential=file"},
      {"states", "eigenpair count for the solver, 1..12 (default 4)"},
      {"suite", "verification suite name (default oscillator-core)"},
      {"tau_normalization", "time-shift constant: keep | drop (default keep)"},
      {"inject_energy_error",
       "perturb state energies by this multiple of hbar*omega"},
      {"out", "output path (default stdout)"},
      {"format", "report format: csv | json (default csv)"},
      {"tol_analytic", "tolerance for closed-form checks (default 1e-6)"},
      {"tol_oracle", "tolerance for numeric-reference checks (default 1e-4)"},
      {"tol_strict", "tolerance for identity-level checks (default 1e-8)"},
  };
}

std::string help_text() {
  std::string out;
  out += "entverify — numerical checks of the entangling coordinate\n";
  out += "transformation for two-particle bound systems.\n\n";
  out += "subcommands:\n";
  out += "  verify    run a verification suite and write its report\n";
  out += "  map       export the time-shift field as CSV\n";
  out += "  ladder    print the ladder-coefficient table\n";
  out += "  solve     run the 1D eigensolver and export eigenpairs\n";
  out += "  cr-check  run the holomorphy probes\n\n";
  out += "flags (each worth one value; flags override --config file keys):\n";
  out += "  --config FILE   read key=value lines ('#' comments)\n";
  for (const auto& [key, desc] : config_key_table()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    out += "  " + flag;
    out += std::string(flag.size() < 22 ? 22 - flag.size() : 1, ' ');
    out += desc + "  [key: " + key + "]\n";
  }
  out += "\nsuites: oscillator-core, oscillator-full, oracle-harmonic,\n";
  out += "        oracle-quartic, reference-independence, all\n";
  out += "\nenvironment:\n";
  out += "  ENTANGLE_VERIFY_THREADS  cap check parallelism (0 = sequential)\n";
  out += "\nexit codes: 0 all checks pass, 1 any check failed, 2 usage error\n";
  return out;
}

}  // namespace entverify
