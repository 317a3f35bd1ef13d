/* Artifact export: snapshot CSV (fixed 12-column layout) with a JSON grid
 * sidecar, convergence-series CSV, field tables, and harness reports.
 * Numbers are written with 17 significant digits so doubles round-trip.
 */
#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "dirfol/em_sources.hpp"
#include "dirfol/gauge.hpp"
#include "dirfol/grid.hpp"
#include "dirfol/scattering.hpp"

namespace dirfol {

using json = nlohmann::ordered_json;

std::string format_double(double v);  // %.17g, period separator

/// One row per grid node: tau, z1, z2, z3, Re/Im of the 4 components.
void write_snapshot_csv(const std::string& path, const SpinorGridField& f);
void write_snapshot_sidecar(const std::string& path, const SpinorGridField& f);

/// (tau, value, cumulative tail sum from the end).
void write_series_csv(const std::string& path, const ConvergenceSeries& s);

/// Field table rows (x0..x3, A0..A3, C).
struct FieldTableRow {
  Vector4d x;
  Vector4d A;
  double C;
};
void write_field_table_csv(const std::string& path,
                           const std::vector<FieldTableRow>& rows);

/// A-hat component table (tau, z1..z3, A_tau, A_1..A_3).
struct CurvTableRow {
  double tau;
  Vector3d z;
  CurvSample c;
};
void write_curv_table_csv(const std::string& path,
                          const std::vector<CurvTableRow>& rows);

const char* verdict_name(Verdict v);
json harness_report_json(const HarnessReport& r);
json bound_report_json(const BoundReport& r);
json series_json(const ConvergenceSeries& s);
void write_json(const std::string& path, const json& j);

}  // namespace dirfol
