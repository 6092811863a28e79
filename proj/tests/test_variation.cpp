#include <cmath>

#include "bergflow/complex_hessian.hpp"
#include "bergflow/variation.hpp"
#include "doctest.h"

using namespace bergflow;
using doctest::Approx;

namespace {

const std::vector<cplx> kNodes = {0.0, cplx(0.2, 0.1), cplx(-0.3, 0.2), cplx(0.1, -0.4)};

FiberOptions fast_options() {
  FiberOptions o;
  o.schedule = DegreeSchedule::linear(400, 0);
  return o;
}

}  // namespace

TEST_CASE("Hartogs families") {
  const FiberedDomain f = hartogs_family(profile_exp_re(), kNodes);
  CHECK(f.parameter_nodes.size() == 4);
  CHECK(f.certificate.find("harmonic") != std::string::npos);
  CHECK(hartogs_family(profile_one_plus_half_abs2(), kNodes).certificate.find("not pseudoconvex") !=
        std::string::npos);
  CHECK(std::get<DiscShape>(f.fiber(cplx(0.2, 0.1)).shape()).radius == Approx(std::exp(0.2)));
  CHECK_THROWS_AS(hartogs_family(profile_exp_re(), {cplx(1.0, 0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(profile_by_name("nope"), std::invalid_argument);

  const auto grid = make_zs_grid(f, {0.0, 0.3, 0.6}, {0.0, 1.0});
  CHECK(grid.size() == 4 * 3 * 2);
  for (const auto& p : grid) CHECK(f.fiber(p.s).contains(make_point(p.z)));
  CHECK_THROWS_AS(make_zs_grid(f, {1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("relative Hessian of explicit functions") {
  RelativeLogDensity field;
  field.evaluate = [](cplx z, cplx s) { return std::norm(z) + 3.0 * std::norm(s) + (z * std::conj(s)).real(); };
  const Eigen::MatrixXcd H = relative_hessian(field, {cplx(0.1, 0.2), cplx(-0.3, 0.1)}, 1e-3, true);
  CHECK((H - H.adjoint()).norm() < 1e-9);
  CHECK(std::abs(H(0, 0) - 1.0) < 1e-8);
  CHECK(std::abs(H(1, 1) - 3.0) < 1e-8);
  CHECK(std::abs(std::abs(H(0, 1)) - 0.5) < 1e-8);
  // log|f|^2 for holomorphic f is pluriharmonic
  field.evaluate = [](cplx z, cplx s) { return std::log(std::norm(1.0 + z * s + z * z)); };
  const Eigen::MatrixXcd P = relative_hessian(field, {cplx(0.2, 0.1), cplx(0.3, -0.2)}, 1e-3, true);
  CHECK(P.norm() < 1e-8);
}

TEST_CASE("fiberwise reference density is psh exactly when the family is pseudoconvex") {
  for (const auto& [profile, expect] :
       std::vector<std::pair<RadiusProfile, bool>>{{profile_exp_re(), true},
                                                   {profile_abs_one_plus_half(), true},
                                                   {profile_one_minus_half_abs2(), true},
                                                   {profile_one_plus_half_abs2(), false}}) {
    const FiberedDomain f = hartogs_family(profile, kNodes);
    const auto grid = make_zs_grid(f, {0.0, 0.3, 0.6}, {0.0, 1.0});
    const RelativeLogDensity ke = fiber_ke_density(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rho = profile.radius(grid[i].s);
      CHECK(ke.log_values[i] ==
            Approx(std::log(4.0 * rho * rho / std::pow(rho * rho - std::norm(grid[i].z), 2))).epsilon(1e-13));
    }
    const PshReport rep = psh_test(ke, f, grid);
    CAPTURE(profile.name);
    CHECK(rep.passes == expect);
    if (!expect) CHECK(rep.min_eigenvalue < -0.1);
  }
}

TEST_CASE("fiber kernels are psh in (z, s) for the first steps") {
  const FiberedDomain f = hartogs_family(profile_exp_re(), kNodes);
  const auto grid = make_zs_grid(f, {0.0, 0.3, 0.6}, {0.0, 1.0});
  for (int m = 1; m <= 3; ++m) {
    const RelativeLogDensity k = fiber_kernels(f, m, grid, fast_options());
    CHECK(k.twist == m);
    const PshReport rep = psh_test(k, f, grid);
    CAPTURE(m);
    CHECK(rep.passes);
    CHECK(rep.min_eigenvalue >= -1e-6);
  }
}

TEST_CASE("fiber kernels detect the non-pseudoconvex control") {
  const FiberedDomain f = hartogs_family(profile_one_plus_half_abs2(), kNodes);
  const auto grid = make_zs_grid(f, {0.0, 0.3, 0.6}, {0.0, 1.0});
  const PshReport rep = psh_test(fiber_kernels(f, 1, grid, fast_options()), f, grid);
  CHECK_FALSE(rep.passes);
  CHECK(rep.min_eigenvalue < -1.0);
}

TEST_CASE("fiber kernels agree with single-fiber runs") {
  const FiberedDomain f = hartogs_family(profile_exp_re(), kNodes);
  const auto grid = make_zs_grid(f, {0.0, 0.5}, {0.0});
  const RelativeLogDensity k = fiber_kernels(f, 2, grid, fast_options());
  const IterationState s = run_fiber(f, grid[3].s, 2, fast_options());
  CHECK(k.log_values[3] == Approx(s.gram.log_kernel(make_point(grid[3].z))).epsilon(1e-14));
  // m = 1 on a fiber of radius rho: kappa = rho^2 / (2 pi (rho^2 - |z|^2)^2)
  const RelativeLogDensity k1 = fiber_kernels(f, 1, grid, fast_options());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = f.profile.radius(grid[i].s);
    const double exact = std::log(rho * rho / (2.0 * kPi)) - 2.0 * std::log(rho * rho - std::norm(grid[i].z));
    CHECK(k1.log_values[i] == Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("stencil margin and failure reporting") {
  const FiberedDomain f = hartogs_family(profile_exp_re(), {cplx(0.9995, 0.0)});
  const auto grid = make_zs_grid(f, {0.0}, {0.0});
  CHECK_THROWS_WITH_AS(psh_test(fiber_ke_density(f, grid), f, grid), doctest::Contains("insufficient margin"),
                       std::invalid_argument);
  const FiberedDomain g = hartogs_family(profile_exp_re(), kNodes);
  const auto rim = make_zs_grid(g, {0.9999}, {0.0});
  CHECK_THROWS_AS(psh_test(fiber_ke_density(g, rim), g, rim), std::invalid_argument);
  FiberOptions short_table;
  short_table.schedule = DegreeSchedule::table({50});
  CHECK_THROWS_WITH_AS(run_fiber(g, kNodes[1], 2, short_table), doctest::Contains("fiber iteration failed at s ="),
                       std::runtime_error);
  CHECK_THROWS_AS(run_fiber(g, kNodes[1], 0, short_table), std::invalid_argument);
}
