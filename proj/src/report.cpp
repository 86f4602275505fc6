#include "entverify/report.hpp"

#include <ostream>

#include <json.hpp>

#include "entverify/format.hpp"

namespace entverify {

bool aggregate_pass(const std::vector<ResidualReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
  }
  return true;
}

void write_reports_csv(std::ostream& os,
                       const std::vector<ResidualReport>& reports) {
  os << "check_name,grid_h,grid_extent,n,m,residual_rms,residual_max,"
        "tolerance,pass\n";
  for (const auto& r : reports) {
    os << r.check_name << ',' << format_double(r.grid_h) << ','
       << format_double(r.grid_extent) << ',';
    if (r.n) os << *r.n;
    os << ',';
    if (r.m) os << *r.m;
    os << ',' << format_double(r.residual_rms) << ','
       << format_double(r.residual_max) << ',' << format_double(r.tolerance)
       << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_reports_json(std::ostream& os,
                        const std::vector<ResidualReport>& reports,
                        const SystemParams& params) {
  nlohmann::ordered_json doc;
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json c;
    c["check_name"] = r.check_name;
    c["grid_h"] = r.grid_h;
    c["grid_extent"] = r.grid_extent;
    if (r.n)
      c["n"] = *r.n;
    else
      c["n"] = nullptr;
    if (r.m)
      c["m"] = *r.m;
    else
      c["m"] = nullptr;
    c["residual_rms"] = r.residual_rms;
    c["residual_max"] = r.residual_max;
    c["tolerance"] = r.tolerance;
    c["pass"] = r.pass;
    doc["checks"].push_back(c);
  }
  doc["params"] = {{"m1", params.m1},     {"m2", params.m2},
                   {"hbar", params.hbar}, {"omega", params.omega},
                   {"m_c", params.m_c},   {"m_r", params.m_r}};
  doc["aggregate_pass"] = aggregate_pass(reports);
  os << doc.dump(2) << '\n';
}

}  // namespace entverify
