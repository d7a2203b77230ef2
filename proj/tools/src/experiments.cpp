#include "qmelab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "qmelab/classify.hpp"
#include "qmelab/config.hpp"
#include "qmelab/dynamics.hpp"
#include "qmelab/errors.hpp"
#include "qmelab/io.hpp"
#include "qmelab/spinmagnet.hpp"

namespace qmelab::experiments {

namespace {

enum class ConfigUse { None, Optional, Required };

class Context {
 public:
  Context(const ExperimentSpec& spec, const std::map<std::string, std::string>& defaults)
      : spec_(spec), values_(defaults) {
    for (const auto& [k, v] : spec.params) values_[k] = v;
  }

  double number(const std::string& key) const { return parse_number(key, values_.at(key)); }

  std::size_t count(const std::string& key) const {
    const double v = number(key);
    if (v < 2 || v != std::floor(v) || v > 1e7) raise(ErrorCode::ConfigError, key + " must be an integer >= 2");
    return static_cast<std::size_t>(v);
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(values_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
    if (out.empty()) raise(ErrorCode::ConfigError, key + " must be a comma separated list");
    return out;
  }

  const std::string& text(const std::string& key) const { return values_.at(key); }

  std::vector<double> grid() const { return linspace(0.0, number("t_max"), count("points")); }

  QuadratureSpec quadrature() const {
    QuadratureSpec q;
    q.hermite_order = static_cast<int>(number("hermite"));
    q.threads = spec_.threads;
    return q;
  }

  json parameters() const {
    json j = json::object();
    for (const auto& [k, v] : values_) {
      const bool is_list = v.find(',') != std::string::npos;
      double x = 0.0;
      if (!is_list && try_number(v, x)) j[k] = x;
      else j[k] = v;
    }
    return j;
  }

  const ExperimentSpec& spec() const { return spec_; }

  static bool try_number(std::string s, double& out) {
    double scale = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
      scale = std::numbers::pi;
      s.resize(s.size() - 2);
      if (s.empty()) {
        out = scale;
        return true;
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return false;
    out = v * scale;
    return true;
  }

 private:
  static double parse_number(const std::string& key, const std::string& s) {
    double v = 0.0;
    if (!try_number(s, v)) raise(ErrorCode::ConfigError, "parameter " + key + " is not a number: '" + s + "'");
    return v;
  }

  const ExperimentSpec& spec_;
  std::map<std::string, std::string> values_;
};

struct Outcome {
  std::string csv;
  json result;
  bool violation = false;
};

struct Command {
  ConfigUse config;
  std::map<std::string, std::string> defaults;
  // Number-valued keys are checked during validation; list and choice keys are listed here.
  std::vector<std::string> lists;
  std::map<std::string, std::vector<std::string>> choices;
  std::function<Outcome(const Context&, const json&)> body;
};

json spectrum_summary(const SpectrumTrajectory& s) {
  json j = spectrum_to_json(s);
  j.erase("grid");
  j.erase("eigvals");
  return j;
}

int negatives(const std::array<double, 4>& ev) {
  int n = 0;
  for (double e : ev)
    if (e < -kPsdTolerance) ++n;
  return n;
}

std::string csv_of(const SpectrumTrajectory& s) {
  std::ostringstream os;
  write_spectrum_csv(os, s);
  return os.str();
}

Outcome addition_figure(const Context& c, AdditionCase which, double t_ref) {
  const AdditionParams p{c.number("omega"), c.number("gamma")};
  const double alpha = c.number("alpha"), beta = c.number("beta");
  const auto grid = c.grid();
  const auto traj = integrate_qme(addition_case_family(which, alpha, beta, p), grid);
  const auto spec = cj_spectrum(traj, c.spec().threads);
  double deviation = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    deviation = std::max(deviation, (traj.maps[k].matrix() -
                                     closed_form_addition_case(which, alpha, beta, p, grid[k]).map.matrix()).norm());
  const auto ref = closed_form_addition_case(which, alpha, beta, p, t_ref);
  Outcome out;
  out.csv = csv_of(spec);
  out.result = spectrum_summary(spec);
  out.result["solver"] = trajectory_to_json(traj)["solver"];
  out.result["closed_form_max_deviation"] = deviation;
  out.result["reference"] = {{"t", t_ref},
                             {"integral", ref.integral},
                             {"cj_eigenvalues", ref.eigenvalues},
                             {"negative_eigenvalues", negatives(ref.eigenvalues)}};
  out.violation = spec.first_violation.has_value();
  return out;
}

Outcome spectrum_of_family(const Context& c, const GeneratorFamily& f) {
  const auto traj = integrate_qme(f, c.grid());
  const auto spec = cj_spectrum(traj, c.spec().threads);
  Outcome out;
  out.csv = csv_of(spec);
  out.result = spectrum_summary(spec);
  out.result["solver"] = trajectory_to_json(traj)["solver"];
  out.violation = spec.first_violation.has_value();
  return out;
}

MagnetModel two_magnets(const Context& c, const Vec3& second_axis, double omega) {
  MagnetModel m;
  m.system.omega = omega;
  Magnet a, b;
  a.coupling = c.number("g1");
  b.coupling = c.number("g2");
  b.axis = second_axis;
  a.dist = MagnetDistribution::gaussian(c.number("sigma"));
  b.dist = MagnetDistribution::gaussian(c.number("sigma"));
  m.magnets = {a, b};
  m.validate();
  return m;
}

Picture picture_for(const MagnetModel& m) {
  return detect_geometry(m) == Geometry::ZZ && m.system.omega != 0.0 ? Picture::Interaction : Picture::Schrodinger;
}

std::string gap_header() {
  std::string h = "t,gap";
  for (const char* name : {"l12", "l1", "l2"})
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h += std::string(",") + name + "_" + std::to_string(i) + std::to_string(j);
  return h + "\n";
}

std::string gap_row(double t, const AdditivityResult& r) {
  std::string row = format_number(t) + "," + format_number(r.gap);
  for (const Mat3* m : {&r.l12, &r.l1, &r.l2})
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row += "," + format_number((*m)(i, j));
  return row + "\n";
}

Outcome single_gap(const Context& c, const MagnetModel& m) {
  const double t = c.number("t");
  const auto r = additivity_gap(m, c.quadrature(), t, picture_for(m));
  Outcome out;
  out.csv = gap_header() + gap_row(t, r);
  out.result = additivity_to_json(r);
  out.result["t"] = t;
  out.result["picture"] = picture_for(m) == Picture::Interaction ? "interaction" : "schrodinger";
  return out;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = [] {
    std::map<std::string, Command> t;
    t["fig2a"] = {ConfigUse::None,
                  {{"alpha", "1"}, {"beta", "1"}, {"omega", "2"}, {"gamma", "1"}, {"t_max", "4pi"}, {"points", "1001"}, {"t_ref", "pi"}},
                  {}, {},
                  [](const Context& c, const json&) { return addition_figure(c, AdditionCase::A, c.number("t_ref")); }};
    t["fig2b"] = {ConfigUse::None,
                  {{"alpha", "1"}, {"beta", "1"}, {"omega", "1"}, {"gamma", "0.5"}, {"t_max", "2pi"}, {"points", "1001"}, {"t_ref", "2pi"}},
                  {}, {},
                  [](const Context& c, const json&) { return addition_figure(c, AdditionCase::B, c.number("t_ref")); }};
    t["fig5c"] = {ConfigUse::None,
                  {{"alpha", "1"}, {"beta", "1"}, {"cutoff", "1"}, {"s", "4.5"}, {"gamma", "1"}, {"t_max", "pi"}, {"points", "1001"}},
                  {}, {},
                  [](const Context& c, const json&) {
                    const auto f = combine(c.number("alpha"),
                                           dephasing_generator(Vec3::UnitX(), RateFunction(rate::OhmicDephasing{c.number("cutoff"), c.number("s")})),
                                           c.number("beta"), amplitude_damping_generator(RateFunction::constant(c.number("gamma"))));
                    return spectrum_of_family(c, f);
                  }};
    t["fig5d"] = {ConfigUse::None,
                  {{"alpha", "1"}, {"beta", "1"}, {"gamma", "1"}, {"gamma0", "150"}, {"width", "0.05"}, {"detuning", "3"}, {"t_max", "pi"}, {"points", "1001"}},
                  {}, {},
                  [](const Context& c, const json&) {
                    const RateFunction jc(rate::JaynesCummings{c.number("gamma0"), c.number("width"), c.number("detuning")});
                    const auto f = combine(c.number("alpha"), dephasing_generator(Vec3::UnitX(), RateFunction::constant(c.number("gamma"))),
                                           c.number("beta"), amplitude_damping_generator(jc));
                    return spectrum_of_family(c, f);
                  }};
    t["appb-rescale"] = {ConfigUse::None,
                         {{"alpha", "0.5"}, {"t_max", "20"}, {"points", "10001"}},
                         {}, {},
                         [](const Context& c, const json&) {
                           const double alpha = c.number("alpha");
                           std::ostringstream os;
                           os << "t,plus_re,plus_im,minus_re,minus_im,witness\n";
                           Outcome out;
                           json first = nullptr;
                           std::size_t witnesses = 0;
                           for (double t : c.grid()) {
                             const auto r = rescaled_jc_cj_eigenvalues(alpha, t);
                             os << format_number(t);
                             if (const auto* p = std::get_if<RescaledEigenpair>(&r)) {
                               os << ',' << format_number(p->plus) << ",0," << format_number(p->minus) << ",0,none\n";
                               continue;
                             }
                             const auto& w = std::get<NonPhysicalWitness>(r);
                             static const char* reasons[] = {"non_real_coherence", "non_real_eigenvalue", "negative_eigenvalue"};
                             os << ',' << format_number(w.plus.real()) << ',' << format_number(w.plus.imag()) << ','
                                << format_number(w.minus.real()) << ',' << format_number(w.minus.imag()) << ','
                                << reasons[static_cast<int>(w.reason)] << '\n';
                             if (first.is_null()) first = t;
                             ++witnesses;
                           }
                           out.csv = os.str();
                           out.result = {{"first_witness", first},
                                         {"witness_count", witnesses},
                                         {"first_singularity", rescaled_jc_first_singularity()}};
                           out.violation = witnesses > 0;
                           return out;
                         }};
    t["appd1"] = {ConfigUse::Optional,
                  {{"g1", "2"}, {"g2", "2"}, {"sigma", "1"}, {"t", "0.5"}, {"hermite", "80"}},
                  {}, {},
                  [](const Context& c, const json& cfg) {
                    return single_gap(c, cfg.is_null() ? two_magnets(c, Vec3::UnitX(), 0.0) : model_from_json(cfg));
                  }};
    t["appd2"] = {ConfigUse::Optional,
                  {{"g1", "2"}, {"g2", "2"}, {"sigma", "1"}, {"omega", "2"}, {"t", "0.5"}, {"hermite", "80"}},
                  {}, {},
                  [](const Context& c, const json& cfg) {
                    return single_gap(c, cfg.is_null() ? two_magnets(c, Vec3::UnitZ(), c.number("omega")) : model_from_json(cfg));
                  }};
    t["magnet-gap"] = {ConfigUse::Required,
                       {{"t_max", "2"}, {"points", "21"}, {"hermite", "80"}},
                       {}, {},
                       [](const Context& c, const json& cfg) {
                         const auto m = model_from_json(cfg);
                         const auto q = c.quadrature();
                         std::string csv = gap_header();
                         double worst = 0.0;
                         for (double t : c.grid()) {
                           const auto r = additivity_gap(m, q, t, picture_for(m));
                           worst = std::max(worst, r.gap);
                           csv += gap_row(t, r);
                         }
                         Outcome out;
                         out.csv = std::move(csv);
                         out.result = {{"max_gap", worst},
                                       {"picture", picture_for(m) == Picture::Interaction ? "interaction" : "schrodinger"}};
                         return out;
                       }};
    t["weak-scaling"] = {ConfigUse::Optional,
                         {{"g1", "2"}, {"g2", "2"}, {"sigma", "1"}, {"t", "0.5"}, {"hermite", "80"}, {"couplings", "2,1,0.5,0.25"}},
                         {"couplings"}, {},
                         [](const Context& c, const json& cfg) {
                           const auto m = cfg.is_null() ? two_magnets(c, Vec3::UnitX(), 0.0) : model_from_json(cfg);
                           const auto r = weak_coupling_scaling(m, c.quadrature(), c.number("t"), c.list("couplings"));
                           std::string csv = "g,gap\n";
                           json pts = json::array();
                           for (const auto& [g, gap] : r.points) {
                             csv += format_number(g) + "," + format_number(gap) + "\n";
                             pts.push_back({g, gap});
                           }
                           Outcome out;
                           out.csv = std::move(csv);
                           out.result = {{"points", pts},
                                         {"exponent", std::isnan(r.exponent) ? json(nullptr) : json(r.exponent)}};
                           return out;
                         }};
    t["classify"] = {ConfigUse::Required,
                     {{"t_max", "5"}, {"points", "501"}, {"commutative", "auto"}},
                     {}, {{"commutative", {"auto", "yes", "no"}}},
                     [](const Context& c, const json& cfg) {
                       const auto f = family_from_json(cfg);
                       const auto grid = c.grid();
                       bool hint = c.text("commutative") == "yes";
                       if (c.text("commutative") == "auto") {
                         std::vector<double> probe;
                         const std::size_t stride = std::max<std::size_t>(1, grid.size() / 48);
                         for (std::size_t k = 0; k < grid.size(); k += stride) probe.push_back(grid[k]);
                         hint = commutativity_gap(f, f, probe) < 1e-10;
                       }
                       ClassifyOptions opt;
                       opt.threads = c.spec().threads;
                       const auto rep = classify(f, grid, hint, opt);
                       std::ostringstream os;
                       os << "t,gksl_at_t,gamma_psd_at_t,min_d_eig,min_gamma_eig\n";
                       for (const auto& fl : rep.flags)
                         os << format_number(fl.t) << ',' << fl.gksl_at_t << ',' << fl.gamma_psd_at_t << ','
                            << format_number(fl.min_d_eig) << ',' << format_number(fl.min_gamma_eig) << '\n';
                       Outcome out;
                       out.csv = os.str();
                       out.result = report_to_json(rep);
                       out.result.erase("flags");
                       out.violation = rep.summary == DynamicsClass::Unphysical;
                       return out;
                     }};
    t["evolve"] = {ConfigUse::Required,
                   {{"t_max", "5"}, {"points", "501"}},
                   {}, {},
                   [](const Context& c, const json& cfg) {
                     const auto traj = integrate_qme(family_from_json(cfg), c.grid());
                     const auto spec = cj_spectrum(traj, c.spec().threads);
                     std::ostringstream os;
                     write_trajectory_csv(os, traj);
                     Outcome out;
                     out.csv = os.str();
                     out.result = spectrum_summary(spec);
                     out.result["solver"] = trajectory_to_json(traj)["solver"];
                     out.result["final_map"] = to_json(traj.maps.back());
                     out.violation = spec.first_violation.has_value();
                     return out;
                   }};
    return t;
  }();
  return table;
}

const Command& command(const std::string& name) {
  const auto it = commands().find(name);
  if (it == commands().end()) raise(ErrorCode::ConfigError, "unknown experiment '" + name + "'");
  return it->second;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::ConfigError, "cannot write " + path);
  out << text;
  if (!out) raise(ErrorCode::ConfigError, "failed writing " + path);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig5c", "fig5d", "appb-rescale", "appd1",
                                              "appd2", "classify", "evolve", "magnet-gap", "weak-scaling"};
  return names;
}

const std::map<std::string, std::string>& experiment_defaults(const std::string& name) {
  return command(name).defaults;
}

void validate(const ExperimentSpec& spec) {
  const Command& cmd = command(spec.name);
  for (const auto& [k, v] : spec.params)
    if (!cmd.defaults.contains(k)) raise(ErrorCode::ConfigError, "experiment " + spec.name + " has no parameter '" + k + "'");
  if (cmd.config == ConfigUse::Required && spec.config.empty())
    raise(ErrorCode::ConfigError, "experiment " + spec.name + " needs --config");
  if (cmd.config == ConfigUse::None && !spec.config.empty())
    raise(ErrorCode::ConfigError, "experiment " + spec.name + " takes no config file");
  const Context ctx(spec, cmd.defaults);
  for (const auto& [k, v] : cmd.defaults) {
    if (std::find(cmd.lists.begin(), cmd.lists.end(), k) != cmd.lists.end()) {
      ctx.list(k);
    } else if (const auto ch = cmd.choices.find(k); ch != cmd.choices.end()) {
      if (std::find(ch->second.begin(), ch->second.end(), ctx.text(k)) == ch->second.end())
        raise(ErrorCode::ConfigError, "parameter " + k + " has no option '" + ctx.text(k) + "'");
    } else {
      ctx.number(k);
    }
  }
  if (cmd.defaults.contains("points")) {
    ctx.count("points");
    if (!(ctx.number("t_max") > 0.0)) raise(ErrorCode::ConfigError, "t_max must be positive");
  }
  if (cmd.defaults.contains("hermite")) {
    const double h = ctx.number("hermite");
    if (h < 8 || h > 400 || h != std::floor(h)) raise(ErrorCode::ConfigError, "hermite must be an integer in [8, 400]");
  }
}

int run(const ExperimentSpec& spec) {
  validate(spec);
  const Command& cmd = command(spec.name);
  const Context ctx(spec, cmd.defaults);
  const json cfg = spec.config.empty() ? json(nullptr) : load_config(spec.config);
  const Outcome out = cmd.body(ctx, cfg);

  json doc;
  doc["experiment"] = spec.name;
  doc["parameters"] = ctx.parameters();
  json given = json::array();
  for (const auto& [k, v] : cmd.defaults)
    if (!spec.params.contains(k)) given.push_back(k);
  doc["defaults_used"] = std::move(given);
  doc["config"] = spec.config.empty() ? json(nullptr) : json(spec.config);
  doc["threads"] = spec.threads;
  doc["violation"] = out.violation;
  doc["result"] = out.result;
  write_file(spec.output + ".csv", out.csv);
  write_file(spec.output + ".json", doc.dump(2) + "\n");
  return out.violation ? kViolation : kOk;
}

unsigned threads_from_env(unsigned fallback) {
  const char* env = std::getenv("QMELAB_THREADS");
  if (env == nullptr) return fallback;
  unsigned v = 0;
  const std::string s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) return fallback;
  return std::min(v, fallback);
}

}  // namespace qmelab::experiments
