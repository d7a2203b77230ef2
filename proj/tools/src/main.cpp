#include <iostream>
#include <thread>

#ifdef QMELAB_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "qmelab/errors.hpp"
#include "qmelab/experiments.hpp"

namespace ex = qmelab::experiments;

int main(int argc, char** argv) {
  CLI::App app{"Time-local master equations for a qubit: experiments and reproductions"};
  app.require_subcommand(1);

  ex::ExperimentSpec spec;
  std::vector<std::string> params;
  for (const auto& name : ex::experiment_names()) {
    std::string help = "defaults:";
    for (const auto& [k, v] : ex::experiment_defaults(name)) help += " " + k + "=" + v;
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", spec.config, "TOML or JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", spec.output, "output path prefix")->capture_default_str();
    sub->add_option("--param", params, "parameter override k=v (repeatable)");
    sub->callback([&spec, name] { spec.name = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ex::kOk : ex::kError;
  }

  try {
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) qmelab::raise(qmelab::ErrorCode::ConfigError, "expected k=v, got '" + p + "'");
      spec.params[p.substr(0, eq)] = p.substr(eq + 1);
    }
    spec.threads = ex::threads_from_env(std::max(1u, std::thread::hardware_concurrency()));
    const int status = ex::run(spec);
    std::cout << spec.name << ": wrote " << spec.output << ".csv and " << spec.output << ".json";
    if (status == ex::kViolation) std::cout << " (physicality violation detected)";
    std::cout << '\n';
    return status;
  } catch (const qmelab::Error& e) {
    std::cerr << "error [" << qmelab::to_string(e.code()) << "]: " << e.what() << '\n';
    return ex::kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kError;
  }
}
