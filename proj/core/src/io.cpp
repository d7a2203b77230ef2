#include "qmelab/io.hpp"

#include <cmath>
#include <cstdio>

#include "qmelab/errors.hpp"

namespace qmelab {

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const SuperOp& op) { return matrix_to_json(Eigen::MatrixXd(op.matrix())); }

json to_json(const CJMatrix& cj) { return matrix_to_json(Eigen::MatrixXcd(cj.matrix())); }

SuperOp superop_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) raise(ErrorCode::ConfigError, "superoperator must be 4x4");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) raise(ErrorCode::ConfigError, "superoperator must be 4x4");
    for (int k = 0; k < 4; ++k) m(i, k) = j[i][k].get<double>();
  }
  return SuperOp(m);
}

Mat4c complex4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) raise(ErrorCode::ConfigError, "matrix must be 4x4");
  Mat4c m;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) raise(ErrorCode::ConfigError, "matrix must be 4x4");
    for (int k = 0; k < 4; ++k) {
      const auto& e = j[i][k];
      if (!e.is_array() || e.size() != 2) raise(ErrorCode::ConfigError, "entries are [re, im] pairs");
      m(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

void write_trajectory_csv(std::ostream& os, const MapTrajectory& traj) {
  os << "t";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) os << ",m" << i << j;
  os << '\n';
  for (std::size_t k = 0; k < traj.grid.size(); ++k) {
    os << format_number(traj.grid[k]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) os << ',' << format_number(traj.maps[k](i, j));
    os << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const SpectrumTrajectory& spec) {
  os << "t,l1,l2,l3,l4\n";
  for (std::size_t k = 0; k < spec.grid.size(); ++k) {
    os << format_number(spec.grid[k]);
    for (double e : spec.eigvals[k]) os << ',' << format_number(e);
    os << '\n';
  }
}

json trajectory_to_json(const MapTrajectory& traj) {
  json j;
  j["solver"] = {{"method", traj.meta.method},
                 {"substep", traj.meta.substep},
                 {"tolerance", traj.meta.tolerance},
                 {"halving_delta", traj.meta.halving_delta},
                 {"refinements", traj.meta.refinements}};
  j["grid"] = traj.grid;
  json maps = json::array();
  for (const auto& m : traj.maps) maps.push_back(to_json(m));
  j["maps"] = std::move(maps);
  return j;
}

json spectrum_to_json(const SpectrumTrajectory& spec) {
  json j;
  j["grid"] = spec.grid;
  json ev = json::array();
  for (const auto& e : spec.eigvals) ev.push_back(e);
  j["eigvals"] = std::move(ev);
  j["min_eig"] = spec.min_eig;
  j["argmin"] = spec.argmin;
  j["first_violation"] = spec.first_violation ? json(*spec.first_violation) : json(nullptr);
  return j;
}

json report_to_json(const ClassificationReport& rep) {
  json j;
  j["summary"] = to_string(rep.summary);
  j["commutative_hint"] = rep.commutative_hint;
  j["constant_generator"] = rep.constant_generator;
  j["min_cj_eig"] = rep.min_cj_eig ? json(*rep.min_cj_eig) : json(nullptr);
  json flags = json::array();
  for (const auto& f : rep.flags)
    flags.push_back({{"t", f.t},
                     {"gksl_at_t", f.gksl_at_t},
                     {"gamma_psd_at_t", f.gamma_psd_at_t},
                     {"min_d_eig", f.min_d_eig},
                     {"min_gamma_eig", f.min_gamma_eig}});
  j["flags"] = std::move(flags);
  json wit = json::array();
  for (const auto& w : rep.witnesses) {
    const json value = std::isnan(w.eigenvalue) ? json(nullptr) : json(w.eigenvalue);
    wit.push_back({{"t", w.t}, {"eigenvalue", value}, {"kind", to_string(w.kind)}});
  }
  j["witnesses"] = std::move(wit);
  return j;
}

json additivity_to_json(const AdditivityResult& r) {
  return {{"L1", matrix_to_json(Eigen::MatrixXd(r.l1))},
          {"L2", matrix_to_json(Eigen::MatrixXd(r.l2))},
          {"L12", matrix_to_json(Eigen::MatrixXd(r.l12))},
          {"gap", r.gap}};
}

}  // namespace qmelab
