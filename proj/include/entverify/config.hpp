// config.hpp — run configuration, parsed from flat key=value files and
// command-line flags (flags win).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entverify/core.hpp"

namespace entverify {

// Usage errors carry the offending token and map to exit code 2.
struct UsageError : std::runtime_error {
  std::string token;
  explicit UsageError(const std::string& msg, std::string tok = {})
      : std::runtime_error(msg), token(std::move(tok)) {}
};

struct RunConfig {
  // system parameters (natural units by default)
  double m1 = 1.0;
  double m2 = 1.0;
  double hbar = 1.0;
  double omega = 1.0;

  // grid
  double h = 0.05;
  double extent = 8.0;
  int order = 4;
  int dim = 3;

  // state / reference selection
  int l1 = 0, l2 = 0, l3 = 0;
  std::string ref = "ground";          // ground | numeric
  std::string potential = "oscillator";  // oscillator | quartic | file
  std::string potential_file;
  int states = 4;  // eigenpair count for the solver

  // suite and diagnostics
  std::string suite = "oscillator-core";
  std::string tau_normalization = "keep";  // keep | drop
  double inject_energy_error = 0.0;

  // output
  std::string out;
  std::string format = "csv";  // csv | json

  // tolerance tiers
  double tol_analytic = 1e-6;
  double tol_oracle = 1e-4;
  double tol_strict = 1e-8;

  // keys that were set explicitly (file or flag), in application order
  std::vector<std::string> explicit_keys;

  SystemParams system() const;
  bool is_explicit(const std::string& key) const;
};

// Parses a config file body and then applies flag overrides. Unknown keys,
// malformed values and contradictory flags throw UsageError.
RunConfig parse_config(const std::string& file_contents,
                       const std::vector<std::string>& flags);

// One line per accepted config key: "name  description".
std::vector<std::pair<std::string, std::string>> config_key_table();

std::string help_text();

}  // namespace entverify
