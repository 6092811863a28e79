#pragma once

#include <functional>

#include "bergflow/types.hpp"

namespace bergflow {

/// Complex Hessian u_{i jbar} of a real function on C^n by central differences
/// in the 2n real coordinates,
///   u_{i jbar} = 1/4 (u_{x_i x_j} + u_{y_i y_j}) + i/4 (u_{x_i y_j} - u_{y_i x_j}).
/// With richardson = true the second-order stencil at h and 2h is combined
/// into a fourth-order estimate (needs a margin of 2h around z).
Eigen::MatrixXcd complex_hessian(const std::function<double(const Point&)>& u, const Point& z,
                                 double h, bool richardson = false);

/// Complex gradient du/dz_i = (u_x - i u_y) / 2 by central differences.
Eigen::VectorXcd complex_gradient(const std::function<double(const Point&)>& u, const Point& z,
                                  double h);

double min_eigenvalue(const Eigen::MatrixXcd& hermitian);

}  // namespace bergflow
