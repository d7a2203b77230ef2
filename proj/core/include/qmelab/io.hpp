#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "qmelab/classify.hpp"
#include "qmelab/dynamics.hpp"
#include "qmelab/spinmagnet.hpp"
#include "qmelab/superop.hpp"

namespace qmelab {

using json = nlohmann::json;

// 12 significant digits, used for every CSV field.
std::string format_number(double x);

json matrix_to_json(const Eigen::MatrixXd& m);
json matrix_to_json(const Eigen::MatrixXcd& m);
json to_json(const SuperOp& op);
json to_json(const CJMatrix& cj);
SuperOp superop_from_json(const json& j);
Mat4c complex4_from_json(const json& j);

// Columns: t, m00, m01, ..., m33.
void write_trajectory_csv(std::ostream& os, const MapTrajectory& traj);
// Columns: t, l1, l2, l3, l4 in ascending order.
void write_spectrum_csv(std::ostream& os, const SpectrumTrajectory& spec);

json trajectory_to_json(const MapTrajectory& traj);
json spectrum_to_json(const SpectrumTrajectory& spec);
json report_to_json(const ClassificationReport& rep);
json additivity_to_json(const AdditivityResult& r);

}  // namespace qmelab
