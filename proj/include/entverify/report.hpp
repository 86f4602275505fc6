// report.hpp — structured pass/fail reports for residual checks and their
// CSV/JSON serialization.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "entverify/core.hpp"

namespace entverify {

struct ResidualReport {
  std::string check_name;
  double grid_h = 0.0;
  double grid_extent = 0.0;
  std::optional<int> n;  // quantum label of the state under test
  std::optional<int> m;  // quantum label of the reference
  double residual_rms = 0.0;
  double residual_max = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline ResidualReport finish_report(ResidualReport r) {
  r.pass = r.residual_rms <= r.tolerance;
  return r;
}

// CSV columns, in exactly this order:
// check_name,grid_h,grid_extent,n,m,residual_rms,residual_max,tolerance,pass
void write_reports_csv(std::ostream& os,
                       const std::vector<ResidualReport>& reports);

// JSON: {"checks": [...], "params": {...}, "aggregate_pass": bool}
void write_reports_json(std::ostream& os,
                        const std::vector<ResidualReport>& reports,
                        const SystemParams& params);

bool aggregate_pass(const std::vector<ResidualReport>& reports);

}  // namespace entverify
