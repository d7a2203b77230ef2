#include "qmelab/quadrature.hpp"

#include <Eigen/Dense>

namespace qmelab {

namespace {

// Golub-Welsch on a symmetric tridiagonal Jacobi matrix with zero diagonal.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(Eigen::VectorXd::Zero(n), offdiag, Eigen::ComputeEigenvectors);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  // Enforce the exact symmetry of the rule.
  for (int k = 0; k < n / 2; ++k) {
    const int j = n - 1 - k;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[j] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[j] = x;
    rule.weights[k] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  const double total = pairwise_sum(rule.weights);
  for (auto& w : rule.weights) w *= mu0 / total;
  return rule;
}

}  // namespace

QuadratureRule gauss_hermite_probabilists(int order) {
  if (order < 1) raise(ErrorCode::InvalidArgument, "quadrature order must be positive");
  Eigen::VectorXd off(order - 1);
  for (int k = 1; k < order; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  return golub_welsch(off, 1.0);
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) raise(ErrorCode::InvalidArgument, "quadrature order must be positive");
  Eigen::VectorXd off(order - 1);
  for (int k = 1; k < order; ++k) {
    const double kk = static_cast<double>(k);
    off(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  return golub_welsch(off, 2.0);
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& grid,
                                         const std::vector<double>& values) {
  if (grid.size() != values.size())
    raise(ErrorCode::GridError, "grid and samples differ in length");
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (grid[k] - grid[k - 1]) * (values[k] + values[k - 1]);
  return out;
}

}  // namespace qmelab
