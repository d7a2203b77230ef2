#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "qmelab/config.hpp"
#include "qmelab/io.hpp"
#include "support.hpp"

using namespace qmelab;
using namespace qmelab::proptest;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "qmelab_config_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

void expect_same_family(const GeneratorFamily& a, const GeneratorFamily& b) {
  for (double t : {0.0, 0.3, 1.1, 2.7}) EXPECT_LT(maxdiff(a(t), b(t)), 1e-15) << t;
}

}  // namespace

TEST(ConfigRates, EveryVariant) {
  EXPECT_EQ(rate_from_json(json(0.25))(3.0), 0.25);
  EXPECT_EQ(rate_from_json(json::parse(R"({"variant":"constant","params":{"gamma":2}})"))(1.0), 2.0);
  const auto sn = rate_from_json(json::parse(R"({"variant":"sinusoid","params":{"amplitude":0.5,"omega":2}})"));
  EXPECT_DOUBLE_EQ(sn(0.4), 0.5 * std::sin(0.8));
  const auto oh = rate_from_json(json::parse(R"({"variant":"ohmic","params":{"cutoff":2,"s":3}})"));
  EXPECT_DOUBLE_EQ(oh(0.7), ohmic_dephasing_rate(2, 3, 0.7));
  const auto jc = rate_from_json(json::parse(R"({"variant":"jaynes-cummings","params":{"gamma0":1.5,"lambda":1,"delta":0}})"));
  EXPECT_DOUBLE_EQ(jc(1.0), jc_damping_rate(1.5, 1, 0, 1.0).value);
  EXPECT_DOUBLE_EQ(rate_from_json(json::parse(R"({"variant":"eternal_nm_z"})"))(1.0), -std::tanh(1.0) / 2);
  EXPECT_DOUBLE_EQ(rate_from_json(json::parse(R"({"variant":"linear","params":{"slope":4}})"))(0.5), 2.0);
  const auto tab = rate_from_json(json::parse(R"({"variant":"tabulated","params":{"times":[0,1],"values":[0,2]}})"));
  EXPECT_DOUBLE_EQ(tab(0.25), 0.5);
}

TEST(ConfigRates, Errors) {
  for (const char* text : {
           R"({"variant":"cubic"})",
           R"({"params":{"gamma":1}})",
           R"({"variant":"constant","params":{}})",
           R"({"variant":"constant","params":{"gamma":"big"}})",
           R"({"variant":"sinusoid","params":{"amplitude":1}})",
           R"({"variant":"tabulated","params":{"times":[0,1],"values":[1]}})",
           R"({"variant":"tabulated","params":{"times":[1,0],"values":[1,2]}})",
           R"({"variant":7})",
       }) {
    expect_code(ErrorCode::ConfigError, [&] { rate_from_json(json::parse(text)); });
  }
}

TEST(ConfigFamilies, MatchDirectConstruction) {
  const auto one = RateFunction::constant(1.0), half = RateFunction::constant(0.5);
  expect_same_family(family_from_json(json::parse(R"({"type":"ru","rates":[1,1,0.5]})")),
                     ru_generator(one, one, half));
  expect_same_family(family_from_json(json::parse(R"({"type":"pc","rates":[0.5,0.5,{"variant":"eternal_nm_z"}],"convention":"appendix"})")),
                     pc_generator(half, half, RateFunction(rate::EternalNMZ{}), TransitionNorm::InvSqrt2));
  expect_same_family(family_from_json(json::parse(R"({"type":"pc","rates":[0.5,1,0]})")),
                     pc_generator(half, one, RateFunction::constant(0.0), TransitionNorm::Half));
  expect_same_family(family_from_json(json::parse(R"({"type":"dephasing","axis":"x","rates":[1]})")),
                     dephasing_generator(Vec3::UnitX(), one));
  expect_same_family(family_from_json(json::parse(R"({"type":"dephasing","axis":[0,0.6,0.8],"rates":[1]})")),
                     dephasing_generator(Vec3(0, 0.6, 0.8), one));
  expect_same_family(family_from_json(json::parse(R"({"type":"amplitude_damping","rates":[0.5]})")),
                     amplitude_damping_generator(half));
  const auto comb = family_from_json(json::parse(
      R"({"type":"combined","alpha":0.5,"beta":0.5,"families":[{"type":"dephasing","rates":[1]},{"type":"amplitude_damping","rates":[1]}]})"));
  expect_same_family(comb, combine(0.5, dephasing_generator(Vec3::UnitZ(), one), 0.5, amplitude_damping_generator(one)));
}

TEST(ConfigFamilies, Errors) {
  for (const char* text : {
           R"({"type":"ru","rates":[1,1]})",
           R"({"type":"ru"})",
           R"({"type":"spin_boson","rates":[1]})",
           R"({"type":"pc","rates":[1,1,1],"convention":"quarter"})",
           R"({"type":"dephasing","axis":"w","rates":[1]})",
           R"({"type":"dephasing","axis":[1,0],"rates":[1]})",
           R"({"type":"dephasing","axis":["a","b","c"],"rates":[1]})",
           R"({"type":"combined","families":[{"type":"ru","rates":[1,1,1]}]})",
           R"([1,2,3])",
       }) {
    expect_code(ErrorCode::ConfigError, [&] { family_from_json(json::parse(text)); });
  }
  expect_code(ErrorCode::BadAxis, [] { family_from_json(json::parse(R"({"type":"dephasing","axis":[0,0,2],"rates":[1]})")); });
}

TEST(ConfigModels, ParsesBothGeometries) {
  const auto zx = model_from_json(json::parse(R"({"magnets":[
      {"g":2,"axis":"z","dist":{"type":"gaussian","param":1}},
      {"g":2,"axis":"x","dist":{"type":"gaussian","param":1}}]})"));
  EXPECT_EQ(detect_geometry(zx), Geometry::ZX);
  EXPECT_EQ(zx.magnets[1].coupling, 2.0);
  const auto zz = model_from_json(json::parse(R"({"system":{"omega":2,"axis":"x"},"magnets":[
      {"g":1,"dist":{"type":"lorentzian","param":0.5}},
      {"g":1,"dist":{"type":"gaussian","param":1}}]})"));
  EXPECT_EQ(detect_geometry(zz), Geometry::ZZ);
  EXPECT_EQ(zz.system.omega, 2.0);
  EXPECT_EQ(zz.magnets[0].dist.kind(), MagnetDistribution::Kind::Lorentzian);
}

TEST(ConfigModels, Errors) {
  for (const char* text : {
           R"({})",
           R"({"magnets":{}})",
           R"({"magnets":[]})",
           R"({"magnets":[{"g":1}]})",
           R"({"magnets":[{"g":1,"dist":{"type":"uniform","param":1}}]})",
           R"({"magnets":[{"g":1,"dist":{"type":"gaussian","param":-1}}]})",
           R"({"magnets":[{"dist":{"type":"gaussian","param":1}}]})",
       }) {
    expect_code(ErrorCode::ConfigError, [&] { model_from_json(json::parse(text)); });
  }
}

TEST(ConfigFiles, TomlAndJsonAgree) {
  const std::string toml_text = R"(
type = "combined"
alpha = 0.5
beta = 0.5

[[families]]
type = "dephasing"
axis = "x"
rates = [1.0]

[[families]]
type = "ru"
rates = [1.0, 1.0, { variant = "sinusoid", params = { omega = 1.0 } }]
)";
  const std::string json_text = R"({"type":"combined","alpha":0.5,"beta":0.5,"families":[
    {"type":"dephasing","axis":"x","rates":[1.0]},
    {"type":"ru","rates":[1.0,1.0,{"variant":"sinusoid","params":{"omega":1.0}}]}]})";
  const json a = load_config(write_temp("family.toml", toml_text));
  const json b = load_config(write_temp("family.json", json_text));
  EXPECT_EQ(a, b);
  expect_same_family(family_from_json(a), family_from_json(b));
}

TEST(ConfigFiles, Errors) {
  expect_code(ErrorCode::ConfigError, [] { load_config("/nonexistent/dir/config.toml"); });
  expect_code(ErrorCode::ConfigError, [] { load_config(write_temp("c.yaml", "type: ru\n")); });
  expect_code(ErrorCode::ConfigError, [] { load_config(write_temp("bad.toml", "type = \n")); });
  expect_code(ErrorCode::ConfigError, [] { load_config(write_temp("bad.json", "{\"type\": }")); });
  EXPECT_NO_THROW(load_config(write_temp("UPPER.TOML", "a = 1\n")));
}

TEST(Io, FormatNumber) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(123456789012345.0), "1.23456789012e+14");
}

TEST(Io, TrajectoryCsvLayout) {
  MapTrajectory traj;
  traj.grid = {0.0, 0.5};
  traj.maps = {SuperOp::identity(), SuperOp::identity()};
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("t,m00,m01,m02,m03,m10", 0), 0u);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 16);
  std::getline(in, row);
  EXPECT_EQ(row, "0,1,0,0,0,0,1,0,0,0,0,1,0,0,0,0,1");
  std::getline(in, row);
  EXPECT_EQ(row.substr(0, 4), "0.5,");
  std::ostringstream again;
  write_trajectory_csv(again, traj);
  EXPECT_EQ(os.str(), again.str());
}

TEST(Io, SpectrumCsvAndJson) {
  SpectrumTrajectory spec;
  spec.grid = {0.0, 1.0};
  spec.eigvals = {{0, 0, 0, 1}, {-0.25, 0.25, 0.5, 0.5}};
  spec.min_eig = -0.25;
  spec.argmin = 1.0;
  std::ostringstream os;
  write_spectrum_csv(os, spec);
  EXPECT_EQ(os.str(), "t,l1,l2,l3,l4\n0,0,0,0,1\n1,-0.25,0.25,0.5,0.5\n");
  json j = spectrum_to_json(spec);
  EXPECT_TRUE(j["first_violation"].is_null());
  spec.first_violation = 0.75;
  j = spectrum_to_json(spec);
  EXPECT_EQ(j["first_violation"], 0.75);
  EXPECT_EQ(j["eigvals"][1][0], -0.25);
}

TEST(Io, SuperOpJsonRoundTrip) {
  const SuperOp op = from_bloch_affine({Vec3(0.5, 0.25, 0.125).asDiagonal(), Vec3(0, 0, 0.5)});
  const SuperOp back = superop_from_json(json::parse(to_json(op).dump()));
  EXPECT_EQ(back.matrix(), op.matrix());
  expect_code(ErrorCode::ConfigError, [] { superop_from_json(json::parse("[[1,0],[0,1]]")); });
  const Mat4c c = complex4_from_json(to_json(cj_matrix(op)));
  EXPECT_EQ(c, cj_matrix(op).matrix());
  expect_code(ErrorCode::ConfigError, [] { complex4_from_json(json::parse("[[1,2,3,4],[1,2,3,4],[1,2,3,4],[1,2,3,4]]")); });
}

TEST(Io, ReportJsonHandlesMissingEigenvalues) {
  ClassificationReport rep;
  rep.summary = DynamicsClass::Unphysical;
  rep.witnesses.push_back({1.0, std::numeric_limits<double>::quiet_NaN(), WitnessKind::Logarithm});
  rep.witnesses.push_back({2.0, -0.5, WitnessKind::Choi});
  const json j = report_to_json(rep);
  EXPECT_TRUE(j["witnesses"][0]["eigenvalue"].is_null());
  EXPECT_EQ(j["witnesses"][1]["eigenvalue"], -0.5);
  EXPECT_TRUE(j["min_cj_eig"].is_null());
  EXPECT_EQ(j["summary"], to_string(DynamicsClass::Unphysical));
  EXPECT_TRUE(json::accept(j.dump()));
}
