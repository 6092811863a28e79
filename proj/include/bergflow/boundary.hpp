#pragma once

#include <functional>
#include <vector>

#include "bergflow/bergman.hpp"

namespace bergflow {

// Leading boundary behaviour K ~ c_n |r|^{-(n+1)} of the Bergman kernel in the
// function-kernel convention, c_n = n!/pi^n when J[r] = 1 on the boundary.

/// Lambda-convention densities are 2^{-n} times function-convention kernels.
double lambda_to_function_kernel(int dim);

/// n!/pi^n.
double leading_coefficient(int dim);

/// (-1)^n det [[r, r_j], [r_kbar, r_{j kbar}]] from a jet of r.
double j_functional(const Jet& r);
double j_functional(const DefiningFunction& r, const Point& z);

/// A defining function positive inside, built from a domain's phi as -scale * phi.
DefiningFunction inner_defining_function(const Domain& domain, double scale = 1.0);

/// Points t * boundary_point for t equispaced in [t_lo, t_hi].
NodeSet radial_path(const Point& boundary_point, double t_lo, double t_hi, int count);

struct FeffermanFit {
  NodeSet path;                       // ordered by increasing r (toward the boundary)
  std::vector<double> kernel_values;  // function-convention K
  std::vector<double> r_values;       // -|r|, negative inside
  double coefficient = 0.0;           // c^ with log c^ = mean(log K + (n+1) log|r|)
  double exponent = 0.0;              // slope of the free fit log K = a + b log|r|
  std::vector<double> residuals;      // log K - log c^ + (n+1) log|r|
  double residual_norm = 0.0;
};

/// Fit over the nodes of a twist-1 Lambda-convention kernel field. Nodes are
/// reordered by |r|; throws std::runtime_error if K is not strictly increasing
/// toward the boundary (an under-resolved kernel) and std::invalid_argument
/// for repeated or non-interior points.
FeffermanFit fit_boundary_coefficient(const LogDensityField& kernel, int dim,
                                      const std::function<double(const Point&)>& r);

}  // namespace bergflow
