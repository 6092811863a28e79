#include "bergflow/ke_reference.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bergflow/complex_hessian.hpp"

namespace bergflow {

namespace {

void require_same_nodes(const NodeSetPtr& a, const NodeSetPtr& b) {
  if (a.get() == b.get()) return;
  if (a->size() != b->size()) throw std::invalid_argument("fields live on different node sets");
  for (std::size_t i = 0; i < a->size(); ++i)
    if ((*a)[i].size() != (*b)[i].size() || ((*a)[i] - (*b)[i]).norm() != 0.0)
      throw std::invalid_argument("fields live on different node sets");
}

template <class F>
VolumeFormField tabulate(NodeSetPtr nodes, int dim, Provenance prov, F&& lebesgue) {
  VolumeFormField f;
  f.provenance = prov;
  f.log_density.reserve(nodes->size());
  const double log_lambda = dim * std::log(2.0);
  for (const auto& p : *nodes) f.log_density.push_back(std::log(lebesgue(p)) - log_lambda);
  f.nodes = std::move(nodes);
  return f;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::disc_closed_form: return "disc_closed_form";
    case Provenance::annulus_closed_form: return "annulus_closed_form";
    case Provenance::ball_closed_form: return "ball_closed_form";
    case Provenance::model_metric: return "model_metric";
    case Provenance::exhaustion_limit: return "exhaustion_limit";
  }
  return "unknown";
}

double ke_disc_density(double radius, cplx z) {
  const double r2 = radius * radius;
  const double u = std::norm(z);
  if (!(u < r2)) throw std::domain_error("point lies outside the disc");
  return 4.0 * r2 / ((r2 - u) * (r2 - u));
}

double ke_annulus_density(double r_in, double r_out, cplx z) {
  const double r = std::abs(z);
  if (!(r > r_in && r < r_out)) throw std::domain_error("point lies outside the annulus");
  // w = log z maps the annulus onto a strip of width L; the strip metric is
  // (pi/L) / sin(pi x / L) |dw|.
  const double L = std::log(r_out / r_in);
  const double lambda = (kPi / L) / (r * std::sin(kPi * std::log(r / r_in) / L));
  return lambda * lambda;
}

double ke_ball_density(int n, double radius, const Point& z) {
  const double r2 = radius * radius;
  const double u = norm2(z);
  if (!(u < r2)) throw std::domain_error("point lies outside the ball");
  return std::pow(2.0 * (n + 1), n) * r2 * std::pow(r2 - u, -(n + 1));
}

double punctured_disc_density(cplx z) {
  const double r = std::abs(z);
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("point lies outside the punctured disc");
  const double l = r * std::log(r);
  return 1.0 / (l * l);
}

VolumeFormField ke_disc(double radius, NodeSetPtr nodes) {
  return tabulate(std::move(nodes), 1, Provenance::disc_closed_form,
                  [radius](const Point& p) { return ke_disc_density(radius, p(0)); });
}

VolumeFormField ke_annulus(double r_in, double r_out, NodeSetPtr nodes) {
  return tabulate(std::move(nodes), 1, Provenance::annulus_closed_form,
                  [=](const Point& p) { return ke_annulus_density(r_in, r_out, p(0)); });
}

VolumeFormField ke_ball(int n, double radius, NodeSetPtr nodes) {
  return tabulate(std::move(nodes), n, Provenance::ball_closed_form,
                  [=](const Point& p) { return ke_ball_density(n, radius, p); });
}

double ke_density_for_domain(const Domain& domain, const Point& z) {
  if (const auto* d = std::get_if<DiscShape>(&domain.shape())) return ke_disc_density(d->radius, z(0));
  if (const auto* a = std::get_if<AnnulusShape>(&domain.shape()))
    return ke_annulus_density(a->inner, a->outer, z(0));
  if (const auto* b = std::get_if<BallShape>(&domain.shape())) return ke_ball_density(b->dim, b->radius, z);
  throw std::invalid_argument("no closed-form Kähler-Einstein reference for domain '" + domain.name() + "'");
}

VolumeFormField ke_for_domain(const Domain& domain, NodeSetPtr nodes) {
  Provenance prov = Provenance::disc_closed_form;
  if (std::holds_alternative<AnnulusShape>(domain.shape())) prov = Provenance::annulus_closed_form;
  if (std::holds_alternative<BallShape>(domain.shape())) prov = Provenance::ball_closed_form;
  return tabulate(std::move(nodes), domain.dim(), prov,
                  [&domain](const Point& p) { return ke_density_for_domain(domain, p); });
}

double einstein_residual(const std::function<double(const Point&)>& lebesgue_density, const Point& z,
                         double h) {
  auto log_density = [&](const Point& p) { return std::log(lebesgue_density(p)); };
  const Eigen::MatrixXcd H = complex_hessian(log_density, z, h);
  const double implied = (2.0 * H).determinant().real();
  const double g = lebesgue_density(z);
  return std::abs(implied - g) / g;
}

double model_log_det(const Domain& domain, const Point& z) {
  const Jet j = domain.jet(z);
  if (!(j.value < 0.0)) throw std::domain_error("model metric evaluated outside the domain");
  const Eigen::MatrixXcd levi = j.levi;
  Eigen::LLT<Eigen::MatrixXcd> llt(levi);
  if (llt.info() != Eigen::Success) throw std::domain_error("defining function is not strictly psh at node");
  const Eigen::VectorXcd grad = j.gradient;
  const double grad_norm2 = (grad.adjoint() * llt.solve(grad))(0).real();
  const double bracket = -j.value + grad_norm2;
  if (!(bracket > 0.0)) throw std::domain_error("-phi + |dphi|^2 <= 0 at node");
  const int n = domain.dim();
  return (n + 1) * std::log(-1.0 / j.value) + std::log(levi.determinant().real()) + std::log(bracket);
}

ModelMetricField model_metric_volume(const Domain& domain, NodeSetPtr nodes) {
  ModelMetricField f;
  f.log_det_g.reserve(nodes->size());
  f.components.reserve(nodes->size());
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    const Point& z = (*nodes)[i];
    try {
      f.log_det_g.push_back(model_log_det(domain, z));
    } catch (const std::domain_error& e) {
      std::ostringstream msg;
      msg << e.what() << " (node " << i << ")";
      throw std::domain_error(msg.str());
    }
    const Jet j = domain.jet(z);
    const Eigen::VectorXcd grad = j.gradient;
    f.components.push_back(Eigen::MatrixXcd(j.levi) / (-j.value) +
                           grad * grad.adjoint() / (j.value * j.value));
  }
  f.nodes = std::move(nodes);
  return f;
}

RatioBracket quasi_isometry_ratio(const ModelMetricField& model, const VolumeFormField& reference) {
  require_same_nodes(model.nodes, reference.nodes);
  RatioBracket b{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < model.log_det_g.size(); ++i) {
    const double ratio = std::exp(model.log_det_g[i] - reference.log_density[i]);
    b.min_ratio = std::min(b.min_ratio, ratio);
    b.max_ratio = std::max(b.max_ratio, ratio);
  }
  return b;
}

ExhaustionResult exhaustion_limit(const std::function<SublevelDomain(double)>& family, const Point& point,
                                  const std::vector<double>& c_values) {
  if (c_values.empty()) throw std::invalid_argument("exhaustion needs at least one level");
  ExhaustionResult r;
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    if (i > 0 && !(c_values[i] > c_values[i - 1]))
      throw std::invalid_argument("exhaustion levels must be strictly ascending");
    const Domain d = family(c_values[i]).as_domain();
    if (!d.contains(point)) throw std::domain_error("exhaustion point lies outside a sublevel domain");
    const double density = ke_density_for_domain(d, point);
    if (!r.densities.empty() && density > r.densities.back() * (1.0 + 1e-10)) {
      std::ostringstream msg;
      msg << "Kähler-Einstein density increased along the exhaustion at level " << c_values[i];
      throw std::runtime_error(msg.str());
    }
    r.levels.push_back(c_values[i]);
    r.densities.push_back(density);
  }
  r.limit_estimate = r.densities.back();
  r.cauchy_gap = r.densities.size() > 1 ? std::abs(r.densities.back() - r.densities[r.densities.size() - 2]) : 0.0;
  return r;
}

YauSchwarzReport yau_schwarz_check(const VolumeFormField& small_domain, const VolumeFormField& large_domain,
                                   double tolerance) {
  require_same_nodes(small_domain.nodes, large_domain.nodes);
  YauSchwarzReport rep;
  rep.worst_log_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < small_domain.log_density.size(); ++i) {
    const double excess = large_domain.log_density[i] - small_domain.log_density[i];
    if (excess > rep.worst_log_excess) {
      rep.worst_log_excess = excess;
      rep.worst_node = i;
    }
  }
  rep.holds = rep.worst_log_excess <= tolerance;
  return rep;
}

}  // namespace bergflow
