#include "bergflow/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bergflow {

double lambda_to_function_kernel(int dim) { return std::ldexp(1.0, dim); }

double leading_coefficient(int dim) { return std::tgamma(dim + 1.0) / std::pow(kPi, dim); }

double j_functional(const Jet& r) {
  const int n = static_cast<int>(r.gradient.size());
  Eigen::MatrixXcd M(n + 1, n + 1);
  M(0, 0) = r.value;
  for (int j = 0; j < n; ++j) {
    M(0, j + 1) = r.gradient(j);
    M(j + 1, 0) = std::conj(r.gradient(j));
  }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) M(k + 1, j + 1) = r.levi(j, k);
  const double det = M.determinant().real();
  return (n % 2 == 0) ? det : -det;
}

double j_functional(const DefiningFunction& r, const Point& z) { return j_functional(r(z)); }

DefiningFunction inner_defining_function(const Domain& domain, double scale) {
  return [phi = domain.defining_function(), scale](const Point& z) {
    Jet j = phi(z);
    j.value *= -scale;
    j.gradient *= -scale;
    j.levi *= -scale;
    return j;
  };
}

NodeSet radial_path(const Point& boundary_point, double t_lo, double t_hi, int count) {
  if (count < 2 || !(t_lo < t_hi)) throw std::invalid_argument("path needs two or more distinct parameters");
  NodeSet path;
  for (int i = 0; i < count; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (count - 1);
    path.push_back(t * boundary_point);
  }
  return path;
}

FeffermanFit fit_boundary_coefficient(const LogDensityField& kernel, int dim,
                                      const std::function<double(const Point&)>& r) {
  if (kernel.twist != 1) throw std::invalid_argument("boundary fit needs a twist-1 kernel");
  const NodeSet& nodes = *kernel.nodes;
  if (nodes.size() < 2) throw std::invalid_argument("boundary fit needs at least two points");

  std::vector<double> abs_r(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    abs_r[i] = std::abs(r(nodes[i]));
    if (!(abs_r[i] > 0.0)) throw std::invalid_argument("path point on the boundary");
  }
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (abs_r[a] != abs_r[b]) return abs_r[a] > abs_r[b];
    return a < b;
  });

  const double log_conv = std::log(lambda_to_function_kernel(dim));
  FeffermanFit fit;
  std::vector<double> x, y;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (k > 0 && !(abs_r[i] < abs_r[order[k - 1]]))
      throw std::invalid_argument("repeated defining-function value along the path");
    const double log_k = kernel.log_values[i] + log_conv;
    if (!y.empty() && !(log_k > y.back()))
      throw std::runtime_error("kernel not increasing toward the boundary (under-resolved)");
    fit.path.push_back(nodes[i]);
    fit.kernel_values.push_back(std::exp(log_k));
    fit.r_values.push_back(-abs_r[i]);
    x.push_back(std::log(abs_r[i]));
    y.push_back(log_k);
  }

  const double cnt = static_cast<double>(x.size());
  double log_c = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) log_c += (y[k] + (dim + 1) * x[k]) / cnt;
  fit.coefficient = std::exp(log_c);

  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / cnt;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / cnt;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  fit.exponent = sxy / sxx;

  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    fit.residuals.push_back(y[k] - log_c + (dim + 1) * x[k]);
    ss += fit.residuals.back() * fit.residuals.back();
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

}  // namespace bergflow
