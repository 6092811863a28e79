#include <cmath>
#include <random>

#include "bergflow/complex_hessian.hpp"
#include "bergflow/ke_reference.hpp"
#include "doctest.h"

using namespace bergflow;
using doctest::Approx;

namespace {

NodeSetPtr radial_samples(double lo, double hi, int count, double angle = 0.3) {
  auto p = std::make_shared<NodeSet>();
  for (int i = 0; i < count; ++i) p->push_back(make_point(std::polar(lo + (hi - lo) * i / (count - 1.0), angle)));
  return p;
}

}  // namespace

TEST_CASE("closed-form densities") {
  CHECK(ke_disc_density(1.0, 0.0) == 4.0);
  CHECK(ke_disc_density(2.0, 0.0) == 1.0);
  CHECK(ke_disc_density(1.0, 0.5) == Approx(4.0 / 0.5625));
  CHECK(ke_ball_density(2, 1.0, make_point(0.0, 0.0)) == 36.0);
  CHECK(ke_ball_density(1, 1.0, make_point(0.3)) == Approx(ke_disc_density(1.0, 0.3)).epsilon(1e-15));
  // annulus: invariant under the inversion z -> ab / conj(z) up to the Jacobian |ab/z^2|^2
  const double a = 0.5, b = 1.0;
  for (double r : {0.55, 0.6, 0.66}) {
    const double w = a * b / r;
    CHECK(ke_annulus_density(a, b, r) == Approx(ke_annulus_density(a, b, w) * std::pow(a * b / (r * r), 2)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ke_disc_density(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(ke_annulus_density(0.5, 1.0, 0.4), std::domain_error);
  CHECK_THROWS_AS(ke_ball_density(2, 1.0, make_point(0.8, 0.8)), std::domain_error);
  CHECK_THROWS_AS(punctured_disc_density(0.0), std::domain_error);
}

TEST_CASE("references solve the Einstein equation") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double th = 2.0 * kPi * u(rng);
    const cplx zd = std::polar(0.9 * u(rng), th);
    CHECK(einstein_residual([](const Point& p) { return ke_disc_density(1.0, p(0)); }, make_point(zd), 1e-4) < 1e-6);
    const cplx za = std::polar(0.55 + 0.4 * u(rng), th);
    CHECK(einstein_residual([](const Point& p) { return ke_annulus_density(0.5, 1.0, p(0)); }, make_point(za), 1e-4) <
          1e-6);
    const cplx zp = std::polar(0.2 + 0.7 * u(rng), th);
    CHECK(einstein_residual([](const Point& p) { return punctured_disc_density(p(0)); }, make_point(zp), 1e-4) < 1e-6);
    const Point zb = make_point(std::polar(0.5 * u(rng), th), std::polar(0.5 * u(rng), -2.0 * th));
    CHECK(einstein_residual([](const Point& p) { return ke_ball_density(2, 1.0, p); }, zb, 1e-4) < 1e-6);
  }
  // A wrong curvature normalization is detected.
  CHECK(einstein_residual([](const Point& p) { return 2.0 * ke_disc_density(1.0, p(0)); }, make_point(0.3), 1e-4) > 0.4);
}

TEST_CASE("thin annuli approach the punctured disc") {
  double prev = INFINITY;
  for (double a : {1e-2, 1e-4, 1e-8, 1e-16}) {
    const double rel = std::abs(ke_annulus_density(a, 1.0, 0.5) / punctured_disc_density(0.5) - 1.0);
    CHECK(rel < prev);
    prev = rel;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("tabulated fields use the Lambda convention") {
  const auto nodes = radial_samples(0.0, 0.9, 10);
  const VolumeFormField f = ke_disc(1.0, nodes);
  CHECK(f.provenance == Provenance::disc_closed_form);
  for (std::size_t i = 0; i < nodes->size(); ++i)
    CHECK(f.log_density[i] == Approx(std::log(ke_disc_density(1.0, (*nodes)[i](0))) - std::log(2.0)));
  auto ball_nodes = std::make_shared<NodeSet>(NodeSet{make_point(0.0, 0.0), make_point(0.3, cplx(0, 0.4))});
  const VolumeFormField g = ke_ball(2, 1.0, ball_nodes);
  CHECK(g.log_density[0] == Approx(std::log(9.0)));
  CHECK(ke_for_domain(make_ball(2, 1.0), ball_nodes).provenance == Provenance::ball_closed_form);
  CHECK(ke_for_domain(make_annulus(0.5, 1.0), radial_samples(0.6, 0.9, 4)).provenance ==
        Provenance::annulus_closed_form);
  CHECK_THROWS_AS(ke_for_domain(make_superellipse(4), nodes), std::invalid_argument);
  CHECK(to_string(Provenance::exhaustion_limit) == "exhaustion_limit");
}

TEST_CASE("model metric determinant against finite differences") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  const std::vector<Domain> domains = {make_disc(1.0), make_disc(2.5), make_ball(2, 1.0), make_superellipse(4)};
  for (const Domain& d : domains) {
    for (int i = 0; i < 10; ++i) {
      Point z(d.dim());
      for (int k = 0; k < d.dim(); ++k) z(k) = cplx(u(rng), u(rng));
      auto potential = [&d](const Point& p) { return -std::log(-d.value(p)); };
      const double fd = complex_hessian(potential, z, 1e-3, true).determinant().real();
      CAPTURE(d.name());
      CHECK(std::abs(std::exp(model_log_det(d, z)) / fd - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("model metric components") {
  const Domain ball = make_ball(2, 1.0);
  auto nodes = std::make_shared<NodeSet>(NodeSet{make_point(cplx(0.2, 0.1), cplx(-0.3, 0.4))});
  const ModelMetricField f = model_metric_volume(ball, nodes);
  auto potential = [&ball](const Point& p) { return -std::log(-ball.value(p)); };
  const Eigen::MatrixXcd fd = complex_hessian(potential, (*nodes)[0], 1e-3, true);
  CHECK((f.components[0] - fd).norm() < 1e-6);
  CHECK(f.log_det_g[0] == Approx(std::log(f.components[0].determinant().real())).epsilon(1e-12));
}

TEST_CASE("model metric is a fixed multiple of the reference on the disc and ball") {
  const auto nodes = radial_samples(0.0, 0.999, 200);
  const RatioBracket disc = quasi_isometry_ratio(model_metric_volume(make_disc(1.0), nodes), ke_disc(1.0, nodes));
  CHECK(disc.min_ratio == Approx(0.5).epsilon(1e-10));
  CHECK(disc.max_ratio == Approx(0.5).epsilon(1e-10));
  auto ball_nodes = std::make_shared<NodeSet>();
  for (int i = 0; i < 50; ++i) ball_nodes->push_back(make_point(std::polar(0.013 * i, 0.1 * i), std::polar(0.01 * i, 1.0)));
  const RatioBracket ball = quasi_isometry_ratio(model_metric_volume(make_ball(2, 1.0), ball_nodes),
                                                 ke_ball(2, 1.0, ball_nodes));
  CHECK(ball.min_ratio == Approx(1.0 / 9.0).epsilon(1e-10));
  CHECK(ball.max_ratio == Approx(1.0 / 9.0).epsilon(1e-10));
}

TEST_CASE("model metric bracket on the annulus stays bounded away from the inner circle") {
  const auto nodes = radial_samples(0.75, 0.999, 100);
  const RatioBracket b =
      quasi_isometry_ratio(model_metric_volume(make_annulus(0.5, 1.0), nodes), ke_annulus(0.5, 1.0, nodes));
  CHECK(b.min_ratio > 0.0);
  CHECK(b.max_ratio / b.min_ratio < 10.0);
}

TEST_CASE("model metric rejects non-psh points") {
  // The product defining function of the annulus is not psh near |z| = a.
  auto nodes = std::make_shared<NodeSet>(NodeSet{make_point(0.8), make_point(0.51)});
  CHECK_THROWS_WITH_AS(model_metric_volume(make_annulus(0.5, 1.0), nodes),
                       doctest::Contains("(node 1)"), std::domain_error);
  CHECK_THROWS_AS(model_log_det(make_disc(1.0), make_point(1.2)), std::domain_error);
  CHECK_THROWS_AS(quasi_isometry_ratio(model_metric_volume(make_disc(1.0), radial_samples(0, 0.5, 3)),
                                       ke_disc(1.0, radial_samples(0, 0.4, 3))),
                  std::invalid_argument);
}

TEST_CASE("exhaustion by sublevel discs") {
  const Domain disc = make_disc(1.0);
  auto family = [&disc](double c) { return sublevel(disc, c); };
  std::vector<double> levels;
  for (double R : {0.5, 0.8, 0.9, 0.99, 0.999}) levels.push_back(R * R - 1.0);
  const ExhaustionResult r = exhaustion_limit(family, make_point(0.0), levels);
  REQUIRE(r.densities.size() == 5);
  for (std::size_t i = 1; i < r.densities.size(); ++i) CHECK(r.densities[i] < r.densities[i - 1]);
  CHECK(r.densities[0] == Approx(16.0).epsilon(1e-12));
  CHECK(r.limit_estimate == Approx(4.0 / (0.999 * 0.999)).epsilon(1e-12));
  CHECK(r.cauchy_gap == Approx(4.0 / (0.99 * 0.99) - 4.0 / (0.999 * 0.999)).epsilon(1e-10));
  CHECK_THROWS_AS(exhaustion_limit(family, make_point(0.0), {-0.1, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(exhaustion_limit(family, make_point(0.9), {-0.75}), std::domain_error);
  CHECK_THROWS_AS(exhaustion_limit(family, make_point(0.0), {}), std::invalid_argument);

  const Domain ann = make_annulus(0.5, 1.0);
  const ExhaustionResult ra =
      exhaustion_limit([&ann](double c) { return sublevel(ann, c); }, make_point(0.7), {-0.05, -0.01, -1e-4});
  CHECK(ra.densities[2] < ra.densities[1]);
  CHECK(ra.densities[2] > ke_annulus_density(0.5, 1.0, 0.7));
}

TEST_CASE("larger domains have smaller reference densities") {
  const auto nodes = radial_samples(0.0, 0.45, 20, 1.1);
  const double radii[] = {0.5, 0.7, 1.0, 1.3};
  for (int i = 0; i < 3; ++i) {
    const YauSchwarzReport rep = yau_schwarz_check(ke_disc(radii[i], nodes), ke_disc(radii[i + 1], nodes));
    CHECK(rep.holds);
    CHECK(rep.worst_log_excess < 0.0);
  }
  const auto ann_nodes = radial_samples(0.61, 0.79, 20);
  CHECK(yau_schwarz_check(ke_annulus(0.6, 0.8, ann_nodes), ke_annulus(0.5, 1.0, ann_nodes)).holds);
  CHECK(yau_schwarz_check(ke_annulus(0.6, 0.8, ann_nodes), ke_disc(1.0, ann_nodes)).holds);
  const YauSchwarzReport wrong = yau_schwarz_check(ke_disc(1.0, nodes), ke_disc(0.5, nodes));
  CHECK_FALSE(wrong.holds);
  CHECK(wrong.worst_log_excess > 0.0);
}
