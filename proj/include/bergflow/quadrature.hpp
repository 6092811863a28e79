#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bergflow/domain.hpp"

namespace bergflow {

enum class Scheme { radial_product, tensor_cartesian };

/// One-dimensional radial rule: int f(|z|) dA ~= 2 pi sum_k w_k r_k f(r_k).
struct RadialRule {
  std::vector<double> radii;
  std::vector<double> weights;
};

/// Lebesgue quadrature over a domain. Immutable after construction.
///
/// For the radial scheme, `nodes`/`weights` hold the two-dimensional exposure
/// (one ring of equispaced points per radius) and `radial` the underlying
/// one-dimensional rule; `radial_nodes` are the radii placed on the positive
/// real axis, which is where rotation-invariant fields are stored.
struct QuadratureGrid {
  Domain domain;
  Scheme scheme;
  NodeSetPtr nodes;
  std::vector<double> weights;
  std::vector<int> panel_counts;
  double refinement_exponent = 1.0;
  std::optional<RadialRule> radial;
  NodeSetPtr radial_nodes;
  int ring_size = 0;
  /// Stated relative error on smooth integrands (fraction of volume in cut
  /// boundary cells for tensor grids; rule-specific bound for radial grids).
  double expected_relative_error = 0.0;

  double total_weight() const;
  double integrate(const std::function<double(const Point&)>& f) const;
};

struct RadialGridOptions {
  int points_per_panel = 20;
  int ring_size = 64;
};

/// Composite Gauss-Legendre rule in a parameter t in [0, 1], mapped to radius by
/// r = R (1 - (1 - t)^p) for discs and by a two-sided graded map for annuli,
/// so nodes cluster geometrically toward each boundary circle.
QuadratureGrid build_radial_grid(const Domain& domain, int radial_panels,
                                 double refinement_exponent = 3.0,
                                 RadialGridOptions options = {});

/// Midpoint tensor rule over the bounding box, keeping cells whose centre lies
/// inside the domain.
QuadratureGrid build_tensor_grid(const Domain& domain, int panels_per_axis);

}  // namespace bergflow
