#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bergflow/types.hpp"

namespace bergflow {

/// Value and first/second complex derivatives of a real defining function:
/// gradient(i) = dphi/dz_i, levi(i, j) = d^2 phi / dz_i dzbar_j.
struct Jet {
  double value = 0.0;
  CVec gradient;
  CMat levi;
};

using DefiningFunction = std::function<Jet(const Point&)>;

enum class Symmetry { circular, reinhardt, none };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Closed-form shapes, kept so that reference metrics and sublevel sets can be
// produced exactly for the model domains.
struct DiscShape {
  double radius;
};
struct AnnulusShape {
  double inner;
  double outer;
};
struct BallShape {
  int dim;
  double radius;
};
using ModelShape = std::variant<std::monostate, DiscShape, AnnulusShape, BallShape>;

/// Radial support {inner < |z| < outer} of a rotation-invariant planar domain.
struct RadialExtent {
  double inner = 0.0;
  double outer = 0.0;
};

/// Bounded domain {phi < 0} in C^n given by a closed-form defining function.
class Domain {
 public:
  struct Options {
    Symmetry symmetry = Symmetry::none;
    ModelShape shape = {};
    std::optional<RadialExtent> radial_extent = {};
    /// Lower bound of phi over the domain; sampled from the bounding box when absent.
    std::optional<double> min_value = {};
  };

  Domain(std::string name, int dim, DefiningFunction phi, std::vector<Interval> bounding_box,
         Options options);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  Symmetry symmetry() const { return symmetry_; }
  const ModelShape& shape() const { return shape_; }
  const std::vector<Interval>& bounding_box() const { return box_; }
  const std::optional<RadialExtent>& radial_extent() const { return radial_extent_; }
  double min_value() const { return min_value_; }

  Jet jet(const Point& z) const;
  double value(const Point& z) const { return phi_(z).value; }
  bool contains(const Point& z) const { return value(z) < 0.0; }

  /// True for planar rotation-invariant domains with a known radial extent.
  bool has_radial_structure() const {
    return dim_ == 1 && symmetry_ == Symmetry::circular && radial_extent_.has_value();
  }

  const DefiningFunction& defining_function() const { return phi_; }

 private:
  std::string name_;
  int dim_;
  DefiningFunction phi_;
  std::vector<Interval> box_;
  Symmetry symmetry_;
  ModelShape shape_;
  std::optional<RadialExtent> radial_extent_;
  double min_value_;
};

Domain make_disc(double radius);

/// Annulus with the product defining function (|z|^2 - a^2)(|z|^2 - b^2).
/// This function is not plurisubharmonic near the inner circle.
Domain make_annulus(double r_in, double r_out);

Domain make_ball(int n, double radius);

/// Superellipse {x^p + y^p < 1}, p even: a smoothed square for grid tests.
Domain make_superellipse(int exponent);

/// Radius profile of a Hartogs family {(z, s) : |z| < rho(s)}.
struct RadiusProfile {
  std::string name;
  std::function<double(cplx)> radius;
};

RadiusProfile profile_exp_re();             // rho(s) = exp(Re s)
RadiusProfile profile_abs_one_plus_half();  // rho(s) = |1 + s/2|
RadiusProfile profile_one_minus_half_abs2();  // rho(s) = 1 - |s|^2 / 2
RadiusProfile profile_one_plus_half_abs2();   // rho(s) = 1 + |s|^2 / 2, not pseudoconvex
RadiusProfile profile_by_name(const std::string& name);

/// The fiber over s of a Hartogs family: the disc of radius rho(s).
Domain make_hartogs_fiber(cplx s, const RadiusProfile& profile);

struct LeviReport {
  double min_levi_eigenvalue;
  bool strictly_psh;
};

/// Smallest eigenvalue of the complex Hessian of phi over deterministic
/// interior samples (radial sweep for planar circular domains, seeded
/// rejection sampling otherwise).
LeviReport levi_check(const Domain& domain, int sample_count, unsigned long long seed = 1);

/// Omega_c = {phi < c}.
struct SublevelDomain {
  Domain parent;
  double level;

  Domain as_domain() const;
};

SublevelDomain sublevel(const Domain& domain, double c);

}  // namespace bergflow
