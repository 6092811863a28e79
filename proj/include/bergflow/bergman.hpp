#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergflow/quadrature.hpp"

namespace bergflow {

// Density convention used throughout: an m-canonical density is stored as the
// log of its coefficient against Lambda^m, Lambda = (sqrt(-1))^{n^2} dz ^ dzbar,
// which is 2^n times Lebesgue measure. With this convention the L2 pairing of
// sections f (dz)^m, g (dz)^m against h = K^{-1} is  int f conj(g) / kappa dLambda.

using MultiIndex = std::array<int, kMaxDim>;

/// Finite section basis z^alpha (dz_1 ^ ... ^ dz_n)^{twist}.
struct SectionBasis {
  int dim = 1;
  int twist = 1;
  int degree = 0;
  bool laurent = false;  // planar only: exponents run over -degree..degree
  std::vector<MultiIndex> exponents;

  std::size_t size() const { return exponents.size(); }
};

/// All multi-indices of total degree <= degree.
SectionBasis monomial_basis(int n, int twist, int degree);

/// Laurent monomials z^k, |k| <= degree, for planar domains avoiding the origin.
SectionBasis laurent_basis(int twist, int degree);

/// Basis appropriate for the domain: Laurent when a planar circular domain
/// omits the origin, polynomial otherwise.
SectionBasis basis_for(const Domain& domain, int twist, int degree);

/// log kappa on a node set for a density of the given twist.
struct LogDensityField {
  int twist = 0;
  NodeSetPtr nodes;
  std::vector<double> log_values;
};

/// Twist-0 field with kappa = 1 (the unweighted Lambda pairing).
LogDensityField unit_weight(NodeSetPtr nodes);

class GramError : public std::runtime_error {
 public:
  GramError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Hard guard on the Jacobi-scaled Gram condition number.
inline constexpr double kGramConditionLimit = 1e12;

/// Weighted Gram matrix G_ab = int z^a conj(z^b) / kappa dLambda, held as
/// G = exp(log_scale) * D * C * D with D the square root of the diagonal and
/// C unit-diagonal and factored C = L L^*. On the radial fast path C = I and
/// only log diag(G) is stored, which keeps degrees in the tens of thousands
/// representable.
class GramSystem {
 public:
  static GramSystem diagonal(SectionBasis basis, Domain domain, std::vector<double> log_diagonal);
  static GramSystem dense(SectionBasis basis, Domain domain, double log_scale,
                          Eigen::VectorXd log_diagonal, Eigen::MatrixXcd unit_matrix);

  const SectionBasis& basis() const { return basis_; }
  const Domain& domain() const { return domain_; }
  bool is_diagonal() const { return diagonal_; }
  /// Condition number of the Jacobi-scaled matrix C (1 on the diagonal path).
  double condition_estimate() const { return condition_; }
  /// log G_aa for every basis element.
  const std::vector<double>& log_diagonal() const { return log_diag_; }

  /// Reconstructed G and its Cholesky factor; only meaningful when the
  /// entries fit in double precision.
  Eigen::MatrixXcd matrix() const;
  Eigen::MatrixXcd factor() const;

  /// log(b(z)^* G^{-1} b(z)), b the basis evaluation vector.
  double log_kernel(const Point& z) const;

  /// log(|sigma(z)|^2 / ||sigma||^2) for sigma = sum c_a z^a with
  /// c = exp(-log_scale/2) D^{-1} y; y is the coefficient vector in the
  /// Jacobi-scaled frame.
  double log_section_ratio(const Eigen::VectorXcd& y, const Point& z) const;

  /// Scaled-frame coefficients of the Gram-optimal section at z.
  Eigen::VectorXcd extremal_coefficients(const Point& z) const;

 private:
  GramSystem(SectionBasis basis, Domain domain);
  /// b(z)/d in the scaled frame, times exp(-offset).
  Eigen::VectorXcd scaled_evaluation(const Point& z, double& log_offset) const;

  SectionBasis basis_;
  Domain domain_;
  std::vector<double> exponent_;  // planar exponents as doubles, diagonal path
  bool diagonal_ = true;
  std::vector<double> log_diag_;
  double log_scale_ = 0.0;
  Eigen::MatrixXcd unit_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
  double condition_ = 1.0;
};

/// Assemble the Gram system of `basis` against h = exp(-weight). The weight
/// twist must be basis.twist - 1. A weight stored on grid.radial_nodes selects
/// the diagonal radial path; a weight on grid.nodes the dense path.
GramSystem assemble_gram(const SectionBasis& basis, const LogDensityField& weight,
                         const QuadratureGrid& grid);

/// log kappa(z) = log(b^* G^{-1} b) at every evaluation point. Points outside
/// the domain are rejected.
LogDensityField kernel_diagonal(const GramSystem& gram, NodeSetPtr eval_points);

/// Kernel of the measure scale * (1 - |z|^2)^s dA on the unit disc.
double weighted_disc_kernel_closed_form(double s, cplx z, double scale);

struct ExtremalReport {
  double max_ratio = 0.0;       // over random unit-norm sections
  double extremal_ratio = 0.0;  // for the Gram-optimal section
};

/// Check K(z) = sup |sigma(z)|^2 over unit-norm sections at one node of the
/// kernel field.
ExtremalReport extremal_check(const LogDensityField& kernel, const GramSystem& gram,
                              const Point& point, int trials, unsigned long long seed = 7);

/// |sigma(z)|^2 / (||sigma||^2 kappa(z)) for explicit scaled-frame coefficients.
double section_ratio(const GramSystem& gram, double log_kappa, const Eigen::VectorXcd& y,
                     const Point& z);

}  // namespace bergflow
