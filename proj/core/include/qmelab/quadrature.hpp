#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "qmelab/errors.hpp"

namespace qmelab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights for E[f(x)], x ~ N(0, 1). Weights sum to 1.
QuadratureRule gauss_hermite_probabilists(int order);
// Nodes and weights on [-1, 1].
QuadratureRule gauss_legendre(int order);

double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

std::vector<double> cumulative_trapezoid(const std::vector<double>& grid,
                                         const std::vector<double>& values);

// Adaptive Simpson for any value type V supporting V + V, V - V, double * V and a norm.
template <class V, class F, class Norm>
V adaptive_simpson(F&& f, double a, double b, double rel_tol, Norm&& norm, int max_depth = 24) {
  struct Impl {
    F& f;
    Norm& norm;
    int max_depth;
    V rec(double a, double b, const V& fa, const V& fm, const V& fb, const V& whole, double tol,
          int depth) {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const V flm = f(lm), frm = f(rm);
      const V left = ((m - a) / 6.0) * (fa + 4.0 * flm + fm);
      const V right = ((b - m) / 6.0) * (fm + 4.0 * frm + fb);
      const V diff = (left + right) - whole;
      if (depth >= max_depth || norm(diff) <= 15.0 * tol)
        return (left + right) + (1.0 / 15.0) * diff;
      return rec(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             rec(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  };
  Impl impl{f, norm, max_depth};
  if (a == b) return 0.0 * f(a);
  // Seed with a few panels so oscillatory integrands are not mistaken for converged.
  const int panels = 16;
  const double h = (b - a) / panels;
  std::vector<double> xs(2 * panels + 1);
  for (int k = 0; k <= 2 * panels; ++k) xs[k] = a + 0.5 * h * k;
  std::vector<V> fs;
  fs.reserve(xs.size());
  for (double x : xs) fs.push_back(f(x));
  V coarse = 0.0 * fs[0];
  for (int p = 0; p < panels; ++p)
    coarse = coarse + (h / 6.0) * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
  double fmax = 0.0;
  for (const auto& v : fs) fmax = std::max(fmax, norm(v));
  if (fmax == 0.0) return coarse;
  const double tol = std::max(rel_tol * norm(coarse), 1e-15 * (b - a) * fmax);
  V total = 0.0 * fs[0];
  for (int p = 0; p < panels; ++p) {
    const V whole = (h / 6.0) * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
    total = total + impl.rec(xs[2 * p], xs[2 * p + 2], fs[2 * p], fs[2 * p + 1], fs[2 * p + 2],
                             whole, tol / panels, 0);
  }
  return total;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol) {
  return adaptive_simpson<double>(f, a, b, rel_tol, [](double x) { return std::abs(x); });
}

}  // namespace qmelab
