#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "bergflow/complex_hessian.hpp"
#include "bergflow/csv.hpp"
#include "bergflow/domain_io.hpp"
#include "bergflow/quadrature.hpp"
#include "doctest.h"

using namespace bergflow;
using doctest::Approx;

namespace {

std::vector<Domain> zoo() {
  return {make_disc(1.0), make_disc(2.0), make_annulus(0.5, 1.0), make_ball(2, 1.0),
          make_superellipse(4), make_hartogs_fiber(cplx(0.3, -0.2), profile_exp_re())};
}

Point random_interior(const Domain& d, std::mt19937_64& rng) {
  const auto& box = d.bounding_box();
  for (;;) {
    Point p(d.dim());
    for (int k = 0; k < d.dim(); ++k) {
      std::uniform_real_distribution<double> ux(box[2 * k].lo, box[2 * k].hi), uy(box[2 * k + 1].lo, box[2 * k + 1].hi);
      p(k) = cplx(ux(rng), uy(rng));
    }
    if (d.value(p) < -1e-3) return p;
  }
}

double radial_integral(const QuadratureGrid& g, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.radial->radii.size(); ++k)
    s += 2.0 * kPi * g.radial->weights[k] * g.radial->radii[k] * f(g.radial->radii[k]);
  return s;
}

}  // namespace

TEST_CASE("disc defining function values") {
  CHECK(make_disc(1.0).value(make_point(0.0)) == -1.0);
  CHECK(make_disc(1.0).value(make_point(1.0)) == 0.0);
  CHECK(make_disc(2.0).value(make_point(1.0)) == -3.0);
  CHECK_THROWS_AS(make_disc(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_disc(-1.0), std::invalid_argument);
}

TEST_CASE("model domains") {
  CHECK(make_annulus(0.5, 1.0).contains(make_point(0.7)));
  CHECK_FALSE(make_annulus(0.5, 1.0).contains(make_point(0.3)));
  CHECK_FALSE(make_annulus(0.5, 1.0).contains(make_point(1.2)));
  CHECK_THROWS_AS(make_annulus(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_annulus(1.0, 1.0), std::invalid_argument);
  CHECK(make_ball(2, 1.0).value(make_point(0.0, 0.0)) == -1.0);
  const Domain fiber = make_hartogs_fiber(0.0, profile_exp_re());
  REQUIRE(std::holds_alternative<DiscShape>(fiber.shape()));
  CHECK(std::get<DiscShape>(fiber.shape()).radius == 1.0);
  CHECK(make_hartogs_fiber(cplx(0.5, 0.3), profile_exp_re()).value(make_point(0.0)) ==
        Approx(-std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("phi is negative inside and vanishes on the boundary along rays") {
  for (int k = 0; k < 16; ++k) {
    const cplx dir = std::polar(1.0, 2.0 * kPi * k / 16);
    const Domain disc = make_disc(1.5);
    CHECK(std::abs(disc.value(make_point(1.5 * dir))) < 1e-14);
    CHECK(disc.value(make_point(1.4 * dir)) < 0.0);
    CHECK(disc.value(make_point(1.6 * dir)) > 0.0);
    const Domain ann = make_annulus(0.5, 1.0);
    CHECK(std::abs(ann.value(make_point(0.5 * dir))) < 1e-15);
    CHECK(std::abs(ann.value(make_point(1.0 * dir))) < 1e-15);
    const Domain ball = make_ball(2, 1.0);
    const Point q = make_point(0.6 * dir, 0.8 * std::conj(dir));
    CHECK(std::abs(ball.value(q)) < 1e-15);
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  std::mt19937_64 rng(11);
  for (const Domain& d : zoo()) {
    CAPTURE(d.name());
    for (int trial = 0; trial < 10; ++trial) {
      const Point z = random_interior(d, rng);
      const Jet j = d.jet(z);
      auto u = [&d](const Point& p) { return d.value(p); };
      const Eigen::VectorXcd g = complex_gradient(u, z, 1e-5);
      const Eigen::MatrixXcd H = complex_hessian(u, z, 1e-3, true);
      const double gscale = std::max(1.0, Eigen::VectorXcd(j.gradient).norm());
      const double hscale = std::max(1.0, Eigen::MatrixXcd(j.levi).norm());
      CHECK((g - Eigen::VectorXcd(j.gradient)).norm() / gscale < 1e-6);
      CHECK((H - Eigen::MatrixXcd(j.levi)).norm() / hscale < 1e-6);
    }
  }
}

TEST_CASE("circular domains are rotation invariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (const Domain& d : zoo()) {
    if (d.symmetry() != Symmetry::circular) continue;
    for (int trial = 0; trial < 20; ++trial) {
      const Point z = random_interior(d, rng);
      const Point w = std::polar(1.0, angle(rng)) * z;
      CHECK(std::abs(d.value(w) - d.value(z)) < 1e-12);
    }
  }
}

TEST_CASE("levi check") {
  const LeviReport disc = levi_check(make_disc(1.0), 50);
  CHECK(disc.min_levi_eigenvalue == Approx(1.0).epsilon(1e-14));
  CHECK(disc.strictly_psh);
  const LeviReport ball = levi_check(make_ball(2, 1.0), 50);
  CHECK(ball.min_levi_eigenvalue == Approx(1.0).epsilon(1e-14));
  // Product function: phi_{z zbar} = 4|z|^2 - a^2 - b^2 < 0 near the inner circle.
  const LeviReport ann = levi_check(make_annulus(0.5, 1.0), 100);
  CHECK_FALSE(ann.strictly_psh);
  const double r = 0.5 + 0.5 * 0.005;
  CHECK(ann.min_levi_eigenvalue == Approx(4.0 * r * r - 1.25).epsilon(1e-12));
  CHECK_THROWS_AS(levi_check(make_disc(1.0), 0), std::invalid_argument);
}

TEST_CASE("radial grid: area and closed-form integrals") {
  const QuadratureGrid g = build_radial_grid(make_disc(1.0), 16);
  CHECK(radial_integral(g, [](double) { return 1.0; }) == Approx(kPi).epsilon(1e-12));
  CHECK(g.total_weight() == Approx(kPi).epsilon(1e-12));
  CHECK(radial_integral(g, [](double r) { return std::pow(1.0 - r * r, 3); }) == Approx(kPi / 4).epsilon(1e-12));
  CHECK_THROWS_AS(build_radial_grid(make_disc(1.0), 3), std::invalid_argument);
  CHECK_THROWS_AS(build_radial_grid(make_ball(2, 1.0), 8), std::invalid_argument);
  CHECK_THROWS_AS(build_radial_grid(make_superellipse(4), 8), std::invalid_argument);
}

TEST_CASE("radial grid reproduces the (1 - r^2/2)^m identity for m <= 200") {
  for (double rho : {0.5, 0.9, 1.0}) {
    const QuadratureGrid g = build_radial_grid(make_disc(rho), 8, 1.0);
    for (int m = 0; m <= 200; ++m) {
      const double q = radial_integral(g, [m](double r) { return std::pow(1.0 - 0.5 * r * r, m); });
      const double exact = 2.0 * kPi / (m + 1) * (1.0 - std::pow(1.0 - 0.5 * rho * rho, m + 1));
      CAPTURE(rho);
      CAPTURE(m);
      CHECK(std::abs(q / exact - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("grid weights are positive and nodes interior") {
  std::vector<QuadratureGrid> grids;
  grids.push_back(build_radial_grid(make_disc(1.0), 40));
  grids.push_back(build_radial_grid(make_annulus(0.5, 1.0), 40));
  grids.push_back(build_tensor_grid(make_disc(1.0), 50));
  grids.push_back(build_tensor_grid(make_ball(2, 1.0), 8));
  grids.push_back(build_tensor_grid(make_superellipse(4), 40));
  for (const auto& g : grids) {
    CHECK(g.weights.size() == g.nodes->size());
    for (double w : g.weights) CHECK(w > 0.0);
    for (const auto& p : *g.nodes) CHECK(g.domain.value(p) < 0.0);
    if (g.radial_nodes)
      for (const auto& p : *g.radial_nodes) CHECK(g.domain.value(p) < 0.0);
  }
}

TEST_CASE("radial grid on the annulus") {
  const QuadratureGrid g = build_radial_grid(make_annulus(0.5, 1.0), 16);
  CHECK(g.total_weight() == Approx(kPi * 0.75).epsilon(1e-12));
  const double q = radial_integral(g, [](double r) { return 1.0 / (r * r); });
  CHECK(q == Approx(2.0 * kPi * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("angular moments vanish on the ring exposure") {
  const QuadratureGrid g = build_radial_grid(make_disc(1.0), 8, 3.0, {20, 64});
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      if (a == b) continue;
      cplx s = 0.0;
      for (std::size_t i = 0; i < g.nodes->size(); ++i) {
        const cplx z = (*g.nodes)[i](0);
        s += g.weights[i] * std::pow(z, a) * std::pow(std::conj(z), b);
      }
      CHECK(std::abs(s) < 1e-12);
    }
}

TEST_CASE("tensor grid area") {
  const QuadratureGrid g = build_tensor_grid(make_disc(1.0), 200);
  CHECK(std::abs(g.total_weight() - kPi) < 5e-3);
  CHECK(g.expected_relative_error > 0.0);
  CHECK(std::abs(g.total_weight() / kPi - 1.0) <= g.expected_relative_error);

  const Domain sq = make_superellipse(8);
  const double coarse = build_tensor_grid(sq, 200).total_weight();
  const double fine = build_tensor_grid(sq, 2000).total_weight();
  CHECK(std::abs(coarse - fine) < 5e-3);
}

TEST_CASE("tensor grid rejects an empty intersection") {
  DefiningFunction positive = [](const Point& z) {
    Jet j;
    j.value = 1.0 + std::norm(z(0));
    j.gradient = CVec::Constant(1, std::conj(z(0)));
    j.levi = CMat::Constant(1, 1, 1.0);
    return j;
  };
  Domain::Options o;
  o.min_value = 1.0;
  const Domain nowhere("empty", 1, positive, {{-1, 1}, {-1, 1}}, o);
  CHECK_THROWS_AS(build_tensor_grid(nowhere, 20), std::runtime_error);
}

TEST_CASE("sublevel domains") {
  const Domain disc = make_disc(1.0);
  const Domain d = sublevel(disc, -0.19).as_domain();
  REQUIRE(std::holds_alternative<DiscShape>(d.shape()));
  CHECK(std::get<DiscShape>(d.shape()).radius == Approx(0.9).epsilon(1e-15));
  CHECK(std::abs(d.value(make_point(0.9))) < 1e-15);
  CHECK_THROWS_AS(sublevel(disc, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(sublevel(disc, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(sublevel(disc, 0.1), std::invalid_argument);

  const Domain ann = make_annulus(0.5, 1.0);
  const Domain sub = sublevel(ann, -0.01).as_domain();
  const auto [a, b] = std::get<AnnulusShape>(sub.shape());
  CHECK(std::abs(sub.value(make_point(a))) < 1e-14);
  CHECK(std::abs(sub.value(make_point(b))) < 1e-14);
  CHECK(a > 0.5);
  CHECK(b < 1.0);
}

TEST_CASE("sublevel at zero reproduces containment") {
  std::mt19937_64 rng(3);
  for (const Domain& d : zoo()) {
    const Domain same = sublevel(d, 0.0).as_domain();
    const auto& box = d.bounding_box();
    for (int i = 0; i < 1000; ++i) {
      Point p(d.dim());
      for (int k = 0; k < d.dim(); ++k) {
        std::uniform_real_distribution<double> ux(1.1 * box[2 * k].lo, 1.1 * box[2 * k].hi);
        std::uniform_real_distribution<double> uy(1.1 * box[2 * k + 1].lo, 1.1 * box[2 * k + 1].hi);
        p(k) = cplx(ux(rng), uy(rng));
      }
      CHECK(same.contains(p) == d.contains(p));
    }
  }
}

TEST_CASE("domains from JSON") {
  using nlohmann::json;
  const Domain disc = domain_from_json(json::parse(R"({"kind":"disc","radius":2.0})"));
  CHECK(disc.value(make_point(1.0)) == -3.0);
  const Domain ann = domain_from_json(json::parse(R"({"kind":"annulus","inner":0.5,"outer":1.0})"));
  CHECK(ann.contains(make_point(0.7)));
  const Domain ball = domain_from_json(json::parse(R"({"kind":"ball","dim":2,"radius":1.0})"));
  CHECK(ball.dim() == 2);
  const Domain fiber = domain_from_json(json::parse(R"({"kind":"hartogs","profile":"exp_re","s":[0.5,0]})"));
  CHECK(std::get<DiscShape>(fiber.shape()).radius == Approx(std::exp(0.5)));

  CHECK_THROWS_WITH_AS(domain_from_json(json::parse(R"({"kind":"disc","radius":1,"foo":2})")),
                       "domain.foo: unknown key 'foo'", ConfigError);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind":"annulus","inner":1,"outer":0.5})")), ConfigError);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind":"torus"})")), ConfigError);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind":"disc","radius":-1})")), ConfigError);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind":"hartogs","profile":"nope"})")), ConfigError);
}

TEST_CASE("grid CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "bergflow_test_domain";
  std::filesystem::create_directories(dir);
  const QuadratureGrid g = build_radial_grid(make_disc(1.0), 4, 3.0, {4, 4});
  write_grid_csv(dir / "grid.csv", g);
  std::ifstream in(dir / "grid.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "node_re,node_im,weight");
  std::size_t rows = 0;
  double total = 0.0;
  for (std::string line; std::getline(in, line); ++rows) total += std::stod(line.substr(line.rfind(',') + 1));
  CHECK(rows == g.nodes->size());
  CHECK(total == Approx(kPi).epsilon(1e-12));
}
