#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmelab/generators.hpp"

namespace qmelab {

enum class DynamicsClass {
  Semigroup,
  CPDivisible,
  SSC,
  // Non-commutative family whose principal logarithm is of GKSL form at every grid time.
  SemigroupSimulable,
  PhysicalOnly,
  Unphysical,
  Unknown,
};

std::string to_string(DynamicsClass c);

struct TimeFlags {
  double t = 0.0;
  bool gksl_at_t = true;
  bool gamma_psd_at_t = true;
  double min_d_eig = 0.0;
  double min_gamma_eig = 0.0;
};

enum class WitnessKind { Kossakowski, CumulativeKossakowski, Choi, Logarithm };

std::string to_string(WitnessKind k);

struct ClassWitness {
  double t = 0.0;
  double eigenvalue = 0.0;
  WitnessKind kind = WitnessKind::Kossakowski;
};

struct ClassificationReport {
  std::vector<TimeFlags> flags;
  DynamicsClass summary = DynamicsClass::Unknown;
  std::vector<ClassWitness> witnesses;
  bool commutative_hint = false;
  bool constant_generator = false;
  // Minimum Choi eigenvalue of the integrated maps, when they were needed.
  std::optional<double> min_cj_eig;
};

struct ClassifyOptions {
  unsigned threads = 1;
  // Keep at most this many witnesses of each kind.
  std::size_t max_witnesses = 64;
};

ClassificationReport classify(const GeneratorFamily& family, const std::vector<double>& grid,
                              bool commutative_hint, const ClassifyOptions& options = {});

// mu_i = exp(-2(Gamma_j + Gamma_k)); checks mu_i + mu_j <= 1 + mu_k cyclically.
bool ru_physicality(double gx, double gy, double gz);

struct PcRateHistory {
  std::vector<double> grid;
  std::vector<double> plus;
  std::vector<double> minus;
  std::vector<double> z;
};

bool pc_physicality(const PcRateHistory& h, double t, TransitionNorm norm = TransitionNorm::Half);

}  // namespace qmelab
