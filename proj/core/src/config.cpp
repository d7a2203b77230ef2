#include "qmelab/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <toml++/toml.hpp>

#include "qmelab/errors.hpp"

namespace qmelab {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) raise(ErrorCode::ConfigError, std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) raise(ErrorCode::ConfigError, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return number(j, key);
}

double number_alias(const json& j, const char* key, const char* alias) {
  if (j.is_object() && j.contains(alias) && !j.contains(key)) return number(j, alias);
  return number(j, key);
}

Vec3 axis_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "x") return Vec3::UnitX();
    if (s == "y") return Vec3::UnitY();
    if (s == "z") return Vec3::UnitZ();
    raise(ErrorCode::ConfigError, "axis names are x, y or z");
  }
  if (!j.is_array() || j.size() != 3) raise(ErrorCode::ConfigError, "axis must be a 3-vector or x/y/z");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto& c : s)
    if (c == '-') c = '_';
  return s;
}

const json& rate_list(const json& j, std::size_t n) {
  const json& r = require(j, "rates");
  if (!r.is_array() || r.size() != n)
    raise(ErrorCode::ConfigError, "expected " + std::to_string(n) + " rates");
  return r;
}

template <class F>
auto config_guard(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, e.what());
  }
}

}  // namespace

json parse_toml(const std::string& text) {
  try {
    const toml::table tbl = toml::parse(text);
    std::ostringstream os;
    os << toml::json_formatter{tbl};
    return json::parse(os.str());
  } catch (const toml::parse_error& e) {
    raise(ErrorCode::ConfigError, std::string("TOML: ") + std::string(e.description()));
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
  if (ext == "toml") return parse_toml(ss.str());
  if (ext == "json") {
    try {
      return json::parse(ss.str());
    } catch (const json::parse_error& e) {
      raise(ErrorCode::ConfigError, std::string("JSON: ") + e.what());
    }
  }
  raise(ErrorCode::ConfigError, "config must end in .json or .toml");
}

static RateFunction rate_impl(const json& j) {
  if (j.is_number()) return RateFunction::constant(j.get<double>());
  const std::string v = lower(require(j, "variant").get<std::string>());
  const json p = j.contains("params") ? j.at("params") : json::object();
  try {
    if (v == "constant") return RateFunction(rate::Constant{number(p, "gamma")});
    if (v == "sinusoid")
      return RateFunction(rate::Sinusoid{number_or(p, "amplitude", 1.0), number(p, "omega")});
    if (v == "ohmic" || v == "ohmic_dephasing")
      return RateFunction(rate::OhmicDephasing{number_alias(p, "cutoff", "omega_c"), number(p, "s")});
    if (v == "jaynes_cummings" || v == "jc")
      return RateFunction(rate::JaynesCummings{number(p, "gamma0"), number_alias(p, "width", "lambda"),
                                               number_alias(p, "detuning", "delta")});
    if (v == "eternal_nm_z" || v == "eternalnmz") return RateFunction(rate::EternalNMZ{});
    if (v == "linear") return RateFunction(rate::Linear{number(p, "slope")});
    if (v == "tabulated")
      return RateFunction(rate::Tabulated{require(p, "times").get<std::vector<double>>(),
                                          require(p, "values").get<std::vector<double>>()});
  } catch (const json::exception& e) {
    raise(ErrorCode::ConfigError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) raise(ErrorCode::ConfigError, e.what());
    throw;
  }
  raise(ErrorCode::ConfigError, "unknown rate variant '" + v + "'");
}

static GeneratorFamily family_impl(const json& j) {
  const std::string type = lower(require(j, "type").get<std::string>());
  if (type == "ru") {
    const json& r = rate_list(j, 3);
    return ru_generator(rate_impl(r[0]), rate_impl(r[1]), rate_impl(r[2]));
  }
  if (type == "pc") {
    const json& r = rate_list(j, 3);
    TransitionNorm norm = TransitionNorm::Half;
    if (j.contains("convention")) {
      const std::string c = lower(j.at("convention").get<std::string>());
      if (c == "inv_sqrt2" || c == "appendix") norm = TransitionNorm::InvSqrt2;
      else if (c != "half" && c != "main") raise(ErrorCode::ConfigError, "unknown convention '" + c + "'");
    }
    return pc_generator(rate_impl(r[0]), rate_impl(r[1]), rate_impl(r[2]), norm);
  }
  if (type == "dephasing") {
    const json& r = rate_list(j, 1);
    const Vec3 axis = j.contains("axis") ? axis_from(j.at("axis")) : Vec3::UnitZ();
    return dephasing_generator(axis, rate_impl(r[0]));
  }
  if (type == "amplitude_damping") {
    const json& r = rate_list(j, 1);
    return amplitude_damping_generator(rate_impl(r[0]));
  }
  if (type == "combined") {
    const json& fs = require(j, "families");
    if (!fs.is_array() || fs.size() != 2) raise(ErrorCode::ConfigError, "combined needs two families");
    return combine(number_or(j, "alpha", 1.0), family_impl(fs[0]), number_or(j, "beta", 1.0),
                   family_impl(fs[1]));
  }
  raise(ErrorCode::ConfigError, "unknown family type '" + type + "'");
}

RateFunction rate_from_json(const json& j) {
  return config_guard([&] { return rate_impl(j); });
}

GeneratorFamily family_from_json(const json& j) {
  return config_guard([&] { return family_impl(j); });
}

MagnetModel model_from_json(const json& j) {
  return config_guard([&] {
    MagnetModel m;
    if (j.contains("system")) {
      const json& s = j.at("system");
      m.system.omega = number_or(s, "omega", 0.0);
      if (s.contains("axis")) m.system.axis = axis_from(s.at("axis"));
    }
    const json& mags = require(j, "magnets");
    if (!mags.is_array()) raise(ErrorCode::ConfigError, "magnets must be a list");
    try {
      for (const auto& mj : mags) {
        Magnet mag;
        mag.coupling = number(mj, "g");
        mag.axis = mj.contains("axis") ? axis_from(mj.at("axis")) : Vec3::UnitZ();
        const json& d = require(mj, "dist");
        const std::string type = lower(require(d, "type").get<std::string>());
        const double p = number(d, "param");
        if (type == "gaussian") mag.dist = MagnetDistribution::gaussian(p);
        else if (type == "lorentzian") mag.dist = MagnetDistribution::lorentzian(p);
        else raise(ErrorCode::ConfigError, "unknown distribution '" + type + "'");
        m.magnets.push_back(mag);
      }
      m.validate();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidArgument) raise(ErrorCode::ConfigError, e.what());
      throw;
    }
    return m;
  });
}

}  // namespace qmelab
