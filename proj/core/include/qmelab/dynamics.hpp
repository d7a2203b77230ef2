#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmelab/generators.hpp"
#include "qmelab/superop.hpp"

namespace qmelab {

struct SolverRecord {
  std::string method;
  double substep = 0.0;
  double tolerance = 0.0;
  // Frobenius change of the final map between the last two step sizes.
  double halving_delta = 0.0;
  int refinements = 0;
};

struct MapTrajectory {
  std::vector<double> grid;
  std::vector<SuperOp> maps;
  // Time derivatives of the maps when known in closed form; empty otherwise.
  std::vector<SuperOp> derivatives;
  SolverRecord meta;
};

struct StepControl {
  double initial_substep = 1e-2;
  double tolerance = 1e-8;
  int max_refinements = 12;
};

void validate_grid(const std::vector<double>& grid);
std::vector<double> linspace(double a, double b, std::size_t n);

MapTrajectory integrate_qme(const GeneratorFamily& family, const std::vector<double>& grid,
                            const StepControl& control = {});

SuperOp dyson_partial_sum(const GeneratorFamily& family, double t, int order);

enum class DerivativeMode { Analytic, CentralDifference };

std::vector<SuperOp> extract_generator_samples(const MapTrajectory& traj, DerivativeMode mode);
// Piecewise-linear interpolation of the extracted samples.
GeneratorFamily extract_generator(const MapTrajectory& traj, DerivativeMode mode);

enum class AdditionCase { A, B };

struct AdditionParams {
  double omega = 2.0;
  double gamma = 1.0;
};

struct AdditionResult {
  SuperOp map;
  std::array<double, 4> eigenvalues{};
  double integral = 0.0;
};

// Case A: alpha * x-dephasing at rate sin(omega t) plus beta * damping at constant gamma.
// Case B: alpha * x-dephasing at constant gamma plus beta * damping at rate sin(omega t).
AdditionResult closed_form_addition_case(AdditionCase c, double alpha, double beta,
                                         const AdditionParams& p, double t);
GeneratorFamily addition_case_family(AdditionCase c, double alpha, double beta,
                                     const AdditionParams& p);

// Choi eigenvalues of a map with Bloch part diag(a1, a2, a3) and translation (0, 0, v).
std::array<double, 4> diagonal_affine_cj_eigenvalues(double a1, double a2, double a3, double v);

// On-resonance damping map with coherence factor G(t); singular where G vanishes.
double jc_coherence_factor(double gamma0, double width, double t);
SuperOp jc_resonant_map(double gamma0, double width, double t);

struct RescaledEigenpair {
  double plus = 0.0;
  double minus = 0.0;
};

enum class WitnessReason { NonRealCoherence, NonRealEigenvalue, NegativeEigenvalue };

struct NonPhysicalWitness {
  double t = 0.0;
  double alpha = 0.0;
  std::complex<double> plus;
  std::complex<double> minus;
  WitnessReason reason = WitnessReason::NonRealCoherence;
};

using RescaledResult = std::variant<RescaledEigenpair, NonPhysicalWitness>;

// gamma0 = 3/2, width = 1 on resonance, generator rescaled by alpha.
RescaledResult rescaled_jc_cj_eigenvalues(double alpha, double t);
// First pole of the unscaled rate, sqrt(2)(pi - atan(sqrt 2)).
double rescaled_jc_first_singularity();

enum class PictureDirection { ToInteraction, ToSchrodinger };

SuperOp free_evolution(const Mat2c& hs, double t);
GeneratorFamily picture_transform(const GeneratorFamily& family, const Mat2c& hs,
                                  PictureDirection dir);
MapTrajectory picture_transform(const MapTrajectory& traj, const Mat2c& hs, PictureDirection dir);

struct SpectrumTrajectory {
  std::vector<double> grid;
  std::vector<std::array<double, 4>> eigvals;
  std::vector<double> running_min;
  double min_eig = 0.0;
  double argmin = 0.0;
  std::optional<double> first_violation;
};

constexpr double kPsdTolerance = 1e-9;

SpectrumTrajectory cj_spectrum(const MapTrajectory& traj, unsigned threads = 1);

}  // namespace qmelab
