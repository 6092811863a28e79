#include "bergflow/variation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "bergflow/complex_hessian.hpp"
#include "bergflow/ke_reference.hpp"

namespace bergflow {

namespace {

std::string describe(cplx s) {
  std::ostringstream out;
  out.precision(17);
  out << "(" << s.real() << ", " << s.imag() << ")";
  return out.str();
}

}  // namespace

FiberedDomain hartogs_family(const RadiusProfile& profile, std::vector<cplx> parameter_nodes,
                             double parameter_radius) {
  for (cplx s : parameter_nodes)
    if (!(std::abs(s) < parameter_radius)) throw std::invalid_argument("parameter node outside the base disc");
  FiberedDomain f{profile, parameter_radius, std::move(parameter_nodes), {}};
  if (profile.name == "exp_re" || profile.name == "abs_one_plus_half")
    f.certificate = "rho = |f| with f holomorphic and nonvanishing; -log rho is harmonic";
  else if (profile.name == "one_minus_half_abs2")
    f.certificate = "-log rho is subharmonic; pseudoconvex";
  else if (profile.name == "one_plus_half_abs2")
    f.certificate = "-log rho is strictly superharmonic; not pseudoconvex";
  else
    f.certificate = "no certificate";
  return f;
}

std::vector<ZSPoint> make_zs_grid(const FiberedDomain& family, const std::vector<double>& fractions,
                                  const std::vector<double>& angles) {
  std::vector<ZSPoint> grid;
  for (cplx s : family.parameter_nodes) {
    const double rho = family.profile.radius(s);
    for (double f : fractions) {
      if (!(f >= 0.0 && f < 1.0)) throw std::invalid_argument("fiber fraction must lie in [0, 1)");
      for (double a : angles) grid.push_back({std::polar(f * rho, a), s});
    }
  }
  return grid;
}

IterationState run_fiber(const FiberedDomain& family, cplx s, int m, const FiberOptions& options) {
  if (m < 1) throw std::invalid_argument("fiber step must be >= 1");
  try {
    const Domain d = family.fiber(s);
    auto grid = std::make_shared<const QuadratureGrid>(build_radial_grid(
        d, options.radial_panels, options.refinement_exponent, {options.points_per_panel, 8}));
    IterationState state = init_state(grid, options.schedule);
    while (state.m < m) state = step(state);
    return state;
  } catch (const std::exception& e) {
    throw std::runtime_error("fiber iteration failed at s = " + describe(s) + ": " + e.what());
  }
}

RelativeLogDensity fiber_kernels(const FiberedDomain& family, int m, const std::vector<ZSPoint>& grid,
                                 FiberOptions options) {
  using Key = std::pair<double, double>;
  auto cache = std::make_shared<std::map<Key, std::shared_ptr<const GramSystem>>>();
  auto fam = std::make_shared<const FiberedDomain>(family);

  RelativeLogDensity field;
  field.description = "log kappa_m on fibers of hartogs:" + family.profile.name;
  field.twist = m;
  field.evaluate = [cache, fam, m, options](cplx z, cplx s) {
    const Key key{s.real(), s.imag()};
    auto it = cache->find(key);
    if (it == cache->end()) {
      auto gram = std::make_shared<const GramSystem>(run_fiber(*fam, s, m, options).gram);
      it = cache->emplace(key, std::move(gram)).first;
    }
    return it->second->log_kernel(make_point(z));
  };
  for (const auto& p : grid) {
    if (!(std::abs(p.z) < family.profile.radius(p.s)))
      throw std::invalid_argument("grid point outside its fiber at s = " + describe(p.s));
    field.points.push_back(p);
    field.log_values.push_back(field.evaluate(p.z, p.s));
  }
  return field;
}

RelativeLogDensity fiber_ke_density(const FiberedDomain& family, const std::vector<ZSPoint>& grid) {
  RelativeLogDensity field;
  field.description = "log dV_E on fibers of hartogs:" + family.profile.name;
  field.twist = 0;
  field.evaluate = [profile = family.profile](cplx z, cplx s) {
    return std::log(ke_disc_density(profile.radius(s), z));
  };
  for (const auto& p : grid) {
    field.points.push_back(p);
    field.log_values.push_back(field.evaluate(p.z, p.s));
  }
  return field;
}

Eigen::MatrixXcd relative_hessian(const RelativeLogDensity& field, const ZSPoint& p, double h,
                                  bool richardson) {
  auto u = [&field](const Point& q) { return field.evaluate(q(0), q(1)); };
  return complex_hessian(u, make_point(p.z, p.s), h, richardson);
}

PshReport psh_test(const RelativeLogDensity& field, const FiberedDomain& family,
                   const std::vector<ZSPoint>& grid, double h, double tolerance) {
  if (grid.empty()) throw std::invalid_argument("psh test needs grid points");
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double reach = 2.0 * h * std::sqrt(2.0);
  PshReport rep;
  rep.tolerance = tolerance;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& p : grid) {
    // every stencil point stays within distance 2h*sqrt(2) in each variable
    bool ok = std::abs(p.s) + reach < family.parameter_radius;
    for (int k = 0; ok && k < 16; ++k) {
      const cplx ds = std::polar(reach, 2.0 * kPi * k / 16);
      ok = std::abs(p.z) + reach < family.profile.radius(p.s + ds);
    }
    if (!ok || !(std::abs(p.z) + reach < family.profile.radius(p.s)))
      throw std::invalid_argument("insufficient margin for the finite-difference stencil at s = " +
                                  describe(p.s));
    const double lo = min_eigenvalue(relative_hessian(field, p, h, true));
    if (lo < rep.min_eigenvalue) {
      rep.min_eigenvalue = lo;
      rep.worst_point = p;
    }
  }
  rep.passes = rep.min_eigenvalue >= -tolerance;
  return rep;
}

}  // namespace bergflow
