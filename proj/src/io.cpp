#include "dirfol/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dirfol {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}
}  // namespace

void write_snapshot_csv(const std::string& path, const SpinorGridField& f) {
  auto out = open_out(path);
  out << "tau,z1,z2,z3,re0,im0,re1,im1,re2,im2,re3,im3\n";
  for (std::int64_t idx = 0; idx < f.grid.size(); ++idx) {
    const Vector3d z = f.grid.node(idx);
    out << format_double(f.tau) << ',' << format_double(z[0]) << ','
        << format_double(z[1]) << ',' << format_double(z[2]);
    for (int c = 0; c < 4; ++c) {
      const complexd v = f.at(c, idx);
      out << ',' << format_double(v.real()) << ',' << format_double(v.imag());
    }
    out << '\n';
  }
}

void write_snapshot_sidecar(const std::string& path, const SpinorGridField& f) {
  json j;
  j["tau"] = f.tau;
  j["grid"]["n"] = f.grid.n;
  j["grid"]["box"] = f.grid.box;
  j["grid"]["dz"] = f.grid.dz();
  j["norm"] = grid_norm(f);
  write_json(path, j);
}

void write_series_csv(const std::string& path, const ConvergenceSeries& s) {
  auto out = open_out(path);
  out << "tau,value,cumulative_tail\n";
  std::vector<double> tail(s.values.size(), 0.0);
  double acc = 0;
  for (size_t i = s.values.size(); i-- > 0;) {
    acc += s.values[i];
    tail[i] = acc;
  }
  for (size_t i = 0; i < s.values.size(); ++i)
    out << format_double(s.taus[i]) << ',' << format_double(s.values[i]) << ','
        << format_double(tail[i]) << '\n';
}

void write_field_table_csv(const std::string& path,
                           const std::vector<FieldTableRow>& rows) {
  auto out = open_out(path);
  out << "x0,x1,x2,x3,A0,A1,A2,A3,C\n";
  for (const auto& r : rows) {
    for (int a = 0; a < 4; ++a) out << format_double(r.x[a]) << ',';
    for (int a = 0; a < 4; ++a) out << format_double(r.A[a]) << ',';
    out << format_double(r.C) << '\n';
  }
}

void write_curv_table_csv(const std::string& path,
                          const std::vector<CurvTableRow>& rows) {
  auto out = open_out(path);
  out << "tau,z1,z2,z3,A_tau,A_1,A_2,A_3\n";
  for (const auto& r : rows) {
    out << format_double(r.tau) << ',' << format_double(r.z[0]) << ','
        << format_double(r.z[1]) << ',' << format_double(r.z[2]) << ','
        << format_double(r.c.a_tau) << ',' << format_double(r.c.a_i[0]) << ','
        << format_double(r.c.a_i[1]) << ',' << format_double(r.c.a_i[2])
        << '\n';
  }
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PASS:
      return "PASS";
    case Verdict::FAIL:
      return "FAIL";
    default:
      return "INCONCLUSIVE";
  }
}

json harness_report_json(const HarnessReport& r) {
  json j;
  j["ray"] = r.ray;
  j["verdict"] = verdict_name(r.verdict);
  j["sup_ratio"] = r.sup_ratio;
  j["trend_slope"] = r.trend_slope;
  j["lambdas"] = r.lambdas;
  j["ratios"] = r.ratios;
  return j;
}

json bound_report_json(const BoundReport& r) {
  json j;
  j["bound"] = r.name;
  j["verdict"] = verdict_name(r.verdict);
  j["sup_ratio"] = r.sup_ratio;
  j["trend_slope"] = r.trend_slope;
  j["taus"] = r.taus;
  j["ratios"] = r.ratios;
  return j;
}

json series_json(const ConvergenceSeries& s) {
  json j;
  j["taus"] = s.taus;
  j["values"] = s.values;
  j["norms"] = s.norms;
  j["fitted_exponent"] = s.fitted_exponent;
  j["fit_valid"] = s.fit_valid;
  j["verdict"] = verdict_name(s.verdict);
  j["floor"] = s.floor;
  return j;
}

void write_json(const std::string& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace dirfol
