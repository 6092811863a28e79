#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bergflow/flow.hpp"

namespace bergflow {

/// Hartogs family {(z, s) : s in Delta(parameter_radius), |z| < rho(s)}.
struct FiberedDomain {
  RadiusProfile profile;
  double parameter_radius = 1.0;
  std::vector<cplx> parameter_nodes;
  /// Closed-form statement of why the total space is (or is not) pseudoconvex.
  std::string certificate;

  Domain fiber(cplx s) const { return make_hartogs_fiber(s, profile); }
};

FiberedDomain hartogs_family(const RadiusProfile& profile, std::vector<cplx> parameter_nodes,
                             double parameter_radius = 1.0);

struct ZSPoint {
  cplx z;
  cplx s;
};

/// For every parameter node s, the points z = f * rho(s) * exp(i theta).
std::vector<ZSPoint> make_zs_grid(const FiberedDomain& family, const std::vector<double>& fractions,
                                  const std::vector<double>& angles);

/// Grid and numerical parameters of each fiber iteration.
struct FiberOptions {
  int radial_panels = 40;
  int points_per_panel = 20;
  double refinement_exponent = 3.0;
  DegreeSchedule schedule = DegreeSchedule::linear(400, 0.0);
};

/// A fiberwise log density on the total space: tabulated values on a (z, s)
/// grid plus an evaluator usable off the grid (finite differences).
struct RelativeLogDensity {
  std::string description;
  int twist = 0;
  std::vector<ZSPoint> points;
  std::vector<double> log_values;
  std::function<double(cplx z, cplx s)> evaluate;
};

/// log kappa_{m,s}(z): the iteration is run to step m on each fiber (cached
/// per s). Failure on a fiber is rethrown naming s.
RelativeLogDensity fiber_kernels(const FiberedDomain& family, int m, const std::vector<ZSPoint>& grid,
                                 FiberOptions options = {});

/// Single-fiber run with the same numerical parameters as fiber_kernels.
IterationState run_fiber(const FiberedDomain& family, cplx s, int m, const FiberOptions& options);

/// log of the fiberwise Kähler-Einstein Lebesgue density 4 rho^2 / (rho^2 - |z|^2)^2.
RelativeLogDensity fiber_ke_density(const FiberedDomain& family, const std::vector<ZSPoint>& grid);

struct PshReport {
  double min_eigenvalue = 0.0;
  ZSPoint worst_point{};
  double tolerance = 1e-6;
  bool passes = false;
};

/// Fourth-order (Richardson) finite-difference complex Hessian in (z, s) at
/// every grid point; throws std::invalid_argument when a stencil point
/// (reach 2h) leaves the total space.
PshReport psh_test(const RelativeLogDensity& field, const FiberedDomain& family,
                   const std::vector<ZSPoint>& grid, double h = 1e-3, double tolerance = 1e-6);

/// Complex Hessian of the field at one point (second-order or Richardson).
Eigen::MatrixXcd relative_hessian(const RelativeLogDensity& field, const ZSPoint& p, double h,
                                  bool richardson);

}  // namespace bergflow
