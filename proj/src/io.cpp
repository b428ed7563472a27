#include "qdistill/io.hpp"

#include <fstream>
#include <sstream>

namespace qdistill {

using nlohmann::json;

json state_to_json(const DensityMatrix& rho) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) {
      Complex z = rho.matrix()(i, j);
      row.push_back({z.real(), z.imag()});
    }
    rows.push_back(row);
  }
  return json{{"dim", 4}, {"matrix", rows}};
}

DensityMatrix state_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("matrix"))
    throw Error(ErrorKind::ParseError, "state document needs fields \"dim\" and \"matrix\"");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<int>() != 4)
    throw Error(ErrorKind::ParseError, "state dimension must be 4");
  const json& rows = doc["matrix"];
  if (!rows.is_array() || rows.size() != 4)
    throw Error(ErrorKind::ParseError, "matrix must have 4 rows");
  Mat4 mat;
  for (int i = 0; i < 4; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != 4)
      throw Error(ErrorKind::ParseError, "each matrix row must have 4 entries");
    for (int j = 0; j < 4; ++j) {
      const json& entry = row[j];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
        throw Error(ErrorKind::ParseError, "each entry must be a [re, im] number pair");
      mat(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return make_density(mat);
}

DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open state file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return state_from_json(doc);
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot open output file: " + path);
  out << state_to_json(rho).dump(2) << "\n";
}

namespace {

json vec3_to_json(const Vec3r& v) { return json{v(0), v(1), v(2)}; }

}  // namespace

json report_to_json(const DistillationReport& report) {
  json stages = json::array();
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    const Stage& s = report.stages[i];
    stages.push_back({{"stage", i},
                      {"label", s.label},
                      {"fidelity_before", s.fidelity_before},
                      {"fidelity_after", s.fidelity_after},
                      {"pass_probability", s.pass_probability},
                      {"pairs_consumed_ratio", s.pairs_consumed_ratio}});
  }
  json trail = json::array();
  for (const Vec3r& d : report.geometry_trail) trail.push_back(vec3_to_json(d));
  return json{{"stages", stages},
              {"geometry_trail", trail},
              {"cumulative_efficiency", report.cumulative_efficiency},
              {"reached_target", report.reached_target}};
}

json geometry_to_json(const GeometryReport& report) {
  json t = json::array();
  for (int i = 0; i < 3; ++i) t.push_back({report.form.t(i, 0), report.form.t(i, 1), report.form.t(i, 2)});
  json out{{"r", vec3_to_json(report.form.r)},
           {"s", vec3_to_json(report.form.s)},
           {"t", t},
           {"d", vec3_to_json(report.d)},
           {"n", report.n},
           {"in_tetrahedron", report.tetrahedron},
           {"in_octahedron", report.octahedron}};
  if (report.fidelity) out["fidelity_from_n"] = *report.fidelity;
  return out;
}

namespace {

std::string num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

std::string stages_csv(const DistillationReport& report) {
  std::ostringstream out;
  out << "stage,fidelity,pass_probability,cumulative_efficiency\n";
  double cumulative = 1.0;
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    const Stage& s = report.stages[i];
    // Same floating path as the pipeline's running product, so the last row
    // reproduces cumulative_efficiency bit for bit.
    cumulative *= s.label == "filter" ? s.pass_probability : s.pass_probability / 2.0;
    out << i << "," << num(s.fidelity_after) << "," << num(s.pass_probability) << ","
        << num(cumulative) << "\n";
  }
  return out.str();
}

std::string trail_csv(const DistillationReport& report) {
  std::ostringstream out;
  out << "t1,t2,t3\n";
  for (const Vec3r& d : report.geometry_trail)
    out << num(d(0)) << "," << num(d(1)) << "," << num(d(2)) << "\n";
  return out.str();
}

}  // namespace qdistill
