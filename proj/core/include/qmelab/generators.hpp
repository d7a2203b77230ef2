#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmelab/rates.hpp"
#include "qmelab/superop.hpp"

namespace qmelab {

enum class FamilyLabel { RU, PC, Dephasing, AmplitudeDamping, Combined, MagnetDerived, Extracted };

std::string to_string(FamilyLabel label);

// Normalization of the transition operators in the phase-covariant form.
// Half: (sx +- i sy)/2.  InvSqrt2: (sx +- i sy)/sqrt(2), equivalent to doubling both rates.
enum class TransitionNorm { Half, InvSqrt2 };

class GeneratorFamily {
 public:
  using Eval = std::function<SuperOp(double)>;

  GeneratorFamily(Eval eval, FamilyLabel label, std::vector<RateFunction> rates = {},
                  std::optional<Vec3> axis = std::nullopt);

  SuperOp operator()(double t) const { return eval_(t); }
  FamilyLabel label() const { return label_; }
  const std::vector<RateFunction>& rates() const { return rates_; }
  const std::optional<Vec3>& axis() const { return axis_; }
  std::optional<double> first_pole(double t0, double t1) const;

 private:
  Eval eval_;
  FamilyLabel label_;
  std::vector<RateFunction> rates_;
  std::optional<Vec3> axis_;
};

GeneratorFamily ru_generator(RateFunction gx, RateFunction gy, RateFunction gz);
GeneratorFamily pc_generator(RateFunction gplus, RateFunction gminus, RateFunction gz,
                             TransitionNorm norm = TransitionNorm::Half);
GeneratorFamily dephasing_generator(const Vec3& axis, RateFunction gamma);
// Relaxation towards r_z = +1 at rate gamma.
GeneratorFamily amplitude_damping_generator(RateFunction gamma);

GeneratorFamily combine(double alpha, const GeneratorFamily& f1, double beta,
                        const GeneratorFamily& f2);

double commutativity_gap(const GeneratorFamily& f1, const GeneratorFamily& f2,
                         const std::vector<double>& grid);

struct GKSLDecomposition {
  Mat2c h = Mat2c::Zero();
  Mat3c d = Mat3c::Zero();
};

GKSLDecomposition gksl_decompose(const SuperOp& g);
SuperOp gksl_rebuild(const GKSLDecomposition& dec);

}  // namespace qmelab
