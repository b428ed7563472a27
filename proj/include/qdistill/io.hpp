#pragma once

#include <string>

#include <json.hpp>

#include "qdistill/distill.hpp"
#include "qdistill/hs_geometry.hpp"
#include "qdistill/qstate.hpp"

namespace qdistill {

// State files are JSON documents {"dim": 4, "matrix": [[[re, im] x4] x4]}.
// Parsing applies the same validation as make_density; structural problems
// throw ParseError.
nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::json& doc);

DensityMatrix read_state_file(const std::string& path);
void write_state_file(const std::string& path, const DensityMatrix& rho);

nlohmann::json report_to_json(const DistillationReport& report);
nlohmann::json geometry_to_json(const GeometryReport& report);

// CSV projections of a distillation report: the stage table
// (stage, fidelity, pass_probability, cumulative_efficiency) and the
// geometry trail (t1, t2, t3).
std::string stages_csv(const DistillationReport& report);
std::string trail_csv(const DistillationReport& report);

}  // namespace qdistill
