#include "bergflow/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace bergflow {

namespace {

struct Rule1d {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

Rule1d gauss_legendre(int order) {
  const auto positive = boost::math::legendre_p_zeros<double>(order);
  Rule1d rule;
  auto weight = [order](double x) {
    const double dp = boost::math::legendre_p_prime<double>(order, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.x.push_back(-*it);
    rule.w.push_back(weight(*it));
  }
  for (double x : positive) {
    rule.x.push_back(x);
    rule.w.push_back(weight(x));
  }
  return rule;
}

}  // namespace

double QuadratureGrid::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double QuadratureGrid::integrate(const std::function<double(const Point&)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * f((*nodes)[i]);
  return sum;
}

QuadratureGrid build_radial_grid(const Domain& domain, int radial_panels, double refinement_exponent,
                                 RadialGridOptions options) {
  if (!domain.has_radial_structure())
    throw std::invalid_argument("radial grids need a planar circular domain");
  if (radial_panels < 4) throw std::invalid_argument("radial grids need at least 4 panels");
  if (!(refinement_exponent >= 1.0)) throw std::invalid_argument("refinement exponent must be >= 1");
  if (options.points_per_panel < 2 || options.ring_size < 1)
    throw std::invalid_argument("invalid radial grid options");

  const auto [inner, outer] = *domain.radial_extent();
  const double p = refinement_exponent;
  const bool two_sided = inner > 0.0;
  const Rule1d gl = gauss_legendre(options.points_per_panel);

  RadialRule rule;
  for (int panel = 0; panel < radial_panels; ++panel) {
    const double a = static_cast<double>(panel) / radial_panels;
    const double b = static_cast<double>(panel + 1) / radial_panels;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      const double wt = 0.5 * (b - a) * gl.w[q];
      double r = 0.0;
      double dr = 0.0;
      if (two_sided) {
        const double tp = std::pow(t, p);
        const double sp = std::pow(1.0 - t, p);
        const double den = tp + sp;
        r = inner + (outer - inner) * tp / den;
        dr = (outer - inner) * p * std::pow(t, p - 1.0) * std::pow(1.0 - t, p - 1.0) / (den * den);
      } else {
        r = outer * (1.0 - std::pow(1.0 - t, p));
        dr = outer * p * std::pow(1.0 - t, p - 1.0);
      }
      if (!(r > inner && r < outer))
        throw std::invalid_argument("radial node rounds onto the boundary; lower the refinement exponent");
      rule.radii.push_back(r);
      rule.weights.push_back(wt * dr);
    }
  }

  auto ring_nodes = std::make_shared<NodeSet>();
  auto radial_nodes = std::make_shared<NodeSet>();
  std::vector<double> weights;
  const int ring = options.ring_size;
  ring_nodes->reserve(rule.radii.size() * static_cast<std::size_t>(ring));
  weights.reserve(ring_nodes->capacity());
  for (std::size_t k = 0; k < rule.radii.size(); ++k) {
    const double r = rule.radii[k];
    radial_nodes->push_back(make_point(cplx(r, 0.0)));
    const double w = 2.0 * kPi * rule.weights[k] * r / ring;
    for (int j = 0; j < ring; ++j) {
      ring_nodes->push_back(make_point(std::polar(r, 2.0 * kPi * j / ring)));
      weights.push_back(w);
    }
  }

  QuadratureGrid g{domain, Scheme::radial_product, std::move(ring_nodes), std::move(weights),
                   {radial_panels}, refinement_exponent, std::move(rule), std::move(radial_nodes),
                   ring, 0.0};
  // Gauss-Legendre panels on a smooth map: exact to rounding for the
  // polynomial integrands used in the test suite.
  g.expected_relative_error = 1e-12;
  return g;
}

QuadratureGrid build_tensor_grid(const Domain& domain, int panels_per_axis) {
  if (panels_per_axis < 1) throw std::invalid_argument("tensor grid needs at least one panel per axis");
  const auto& box = domain.bounding_box();
  const int axes = 2 * domain.dim();
  const int P = panels_per_axis;

  std::vector<double> h(static_cast<std::size_t>(axes));
  double cell_volume = 1.0;
  for (int a = 0; a < axes; ++a) {
    h[a] = (box[a].hi - box[a].lo) / P;
    cell_volume *= h[a];
  }

  auto to_point = [&](const std::vector<double>& coord) {
    Point p(domain.dim());
    for (int d = 0; d < domain.dim(); ++d) p(d) = cplx(coord[2 * d], coord[2 * d + 1]);
    return p;
  };

  // Sign of phi on the vertex lattice, used to flag cells cut by the boundary.
  const int V = P + 1;
  long vertex_count = 1;
  for (int a = 0; a < axes; ++a) vertex_count *= V;
  std::vector<char> inside_vertex(static_cast<std::size_t>(vertex_count));
  std::vector<double> coord(static_cast<std::size_t>(axes));
  for (long idx = 0; idx < vertex_count; ++idx) {
    long rest = idx;
    for (int a = 0; a < axes; ++a) {
      coord[a] = box[a].lo + h[a] * static_cast<double>(rest % V);
      rest /= V;
    }
    inside_vertex[idx] = domain.contains(to_point(coord)) ? 1 : 0;
  }

  auto nodes = std::make_shared<NodeSet>();
  std::vector<double> weights;
  long cell_count = 1;
  for (int a = 0; a < axes; ++a) cell_count *= P;
  long cut_cells = 0;
  std::vector<long> cell_idx(static_cast<std::size_t>(axes));
  for (long idx = 0; idx < cell_count; ++idx) {
    long rest = idx;
    for (int a = 0; a < axes; ++a) {
      cell_idx[a] = rest % P;
      rest /= P;
      coord[a] = box[a].lo + h[a] * (static_cast<double>(cell_idx[a]) + 0.5);
    }
    int corners_inside = 0;
    for (int c = 0; c < (1 << axes); ++c) {
      long v = 0;
      long stride = 1;
      for (int a = 0; a < axes; ++a) {
        v += (cell_idx[a] + ((c >> a) & 1)) * stride;
        stride *= V;
      }
      corners_inside += inside_vertex[v];
    }
    if (corners_inside != 0 && corners_inside != (1 << axes)) ++cut_cells;

    Point p = to_point(coord);
    if (domain.contains(p)) {
      nodes->push_back(std::move(p));
      weights.push_back(cell_volume);
    }
  }
  if (nodes->empty()) throw std::runtime_error("tensor grid has no interior nodes");

  QuadratureGrid g{domain, Scheme::tensor_cartesian, std::move(nodes), std::move(weights),
                   std::vector<int>(static_cast<std::size_t>(axes), P), 1.0, std::nullopt,
                   nullptr, 0, 0.0};
  g.expected_relative_error = cut_cells * cell_volume / g.total_weight();
  return g;
}

}  // namespace bergflow
