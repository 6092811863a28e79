#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bergflow/domain.hpp"

namespace bergflow {

// Kähler-Einstein reference volume forms.
//
// Normalization: omega_E = (i/2) sum g_{ij} dz_i ^ dzbar_j with -Ric(omega_E) = omega_E,
// Ric = -i ddbar log det g. Then dV_E = omega_E^n / n! = det(g) dLebesgue, and the
// Einstein condition reads  ddbar_{ij} log det g = g_{ij} / 2.  For n = 1 this is
// the curvature -1 metric: disc density 4R^2/(R^2-|z|^2)^2. On the ball,
// g = 2(n+1) ddbar(-log(R^2-|z|^2)) and det g = (2(n+1))^n R^2 (R^2-|z|^2)^{-(n+1)}.
//
// Fields store log of the coefficient against Lambda = 2^n Lebesgue.

enum class Provenance { disc_closed_form, annulus_closed_form, ball_closed_form, model_metric, exhaustion_limit };

std::string to_string(Provenance p);

struct VolumeFormField {
  NodeSetPtr nodes;
  std::vector<double> log_density;  // against Lambda
  Provenance provenance = Provenance::disc_closed_form;
};

/// Pointwise Lebesgue densities of the closed-form references.
double ke_disc_density(double radius, cplx z);
double ke_annulus_density(double r_in, double r_out, cplx z);
double ke_ball_density(int n, double radius, const Point& z);
/// Curvature -1 density of the punctured unit disc, 1/(|z| log|z|)^2.
double punctured_disc_density(cplx z);

VolumeFormField ke_disc(double radius, NodeSetPtr nodes);
VolumeFormField ke_annulus(double r_in, double r_out, NodeSetPtr nodes);
VolumeFormField ke_ball(int n, double radius, NodeSetPtr nodes);

/// Reference for a model domain (disc, annulus or ball shape).
VolumeFormField ke_for_domain(const Domain& domain, NodeSetPtr nodes);
double ke_density_for_domain(const Domain& domain, const Point& z);

/// Relative residual |det(2 ddbar log G) - G| / G of the Einstein equation for
/// a Lebesgue density G, by central differences with step h.
double einstein_residual(const std::function<double(const Point&)>& lebesgue_density,
                         const Point& z, double h);

/// Model metric omega = i ddbar(-log(-phi)). `log_det_g` is the log determinant
/// of the Levi matrix of -log(-phi),
///   (-1/phi)^{n+1} det(phi_{ij}) (-phi + |dphi|^2),
/// with |dphi|^2 = phi^{ij} phi_i conj(phi_j) the gradient norm in the Levi
/// metric of phi. It equals the Lambda-coefficient of omega^n / n!.
struct ModelMetricField {
  NodeSetPtr nodes;
  std::vector<double> log_det_g;
  std::vector<Eigen::MatrixXcd> components;  // Levi matrix of -log(-phi)
};

/// Throws std::domain_error naming the first node where -phi + |dphi|^2 <= 0
/// or phi is not strictly plurisubharmonic.
ModelMetricField model_metric_volume(const Domain& domain, NodeSetPtr nodes);

/// log det of the Levi matrix of -log(-phi) at one point.
double model_log_det(const Domain& domain, const Point& z);

struct RatioBracket {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
};

RatioBracket quasi_isometry_ratio(const ModelMetricField& model, const VolumeFormField& reference);

struct ExhaustionResult {
  std::vector<double> levels;
  std::vector<double> densities;  // Lebesgue density of dV_{E,c} at the point
  double limit_estimate = 0.0;
  double cauchy_gap = 0.0;  // |last - previous|
};

/// Evaluate dV_{E,c}(point) along an increasing family of sublevel domains and
/// verify pointwise monotone decrease (tolerance 1e-10 relative).
ExhaustionResult exhaustion_limit(const std::function<SublevelDomain(double)>& family,
                                  const Point& point, const std::vector<double>& c_values);

struct YauSchwarzReport {
  bool holds = true;
  double worst_log_excess = 0.0;  // max log(large / small); <= tolerance when holds
  std::size_t worst_node = 0;
};

/// The KE density of a larger domain is pointwise no larger than that of a
/// smaller one. Compares log densities with the given tolerance.
YauSchwarzReport yau_schwarz_check(const VolumeFormField& small_domain,
                                   const VolumeFormField& large_domain, double tolerance = 1e-10);

}  // namespace bergflow
