#include "bergflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace bergflow {

namespace {

std::vector<Interval> square_box(int dim, double half_width) {
  return std::vector<Interval>(static_cast<std::size_t>(2 * dim), Interval{-half_width, half_width});
}

// phi = |z|^2 - R^2 in any dimension.
DefiningFunction sphere_function(int dim, double radius) {
  const double r2 = radius * radius;
  return [dim, r2](const Point& z) {
    Jet j;
    j.value = norm2(z) - r2;
    j.gradient = z.conjugate();
    j.levi = CMat::Identity(dim, dim);
    return j;
  };
}

double sampled_min(const DefiningFunction& phi, int dim, const std::vector<Interval>& box) {
  // Coarse lattice scan; only used when the factory does not know the minimum.
  const int per_axis = dim == 1 ? 129 : 17;
  const int axes = 2 * dim;
  long total = 1;
  for (int a = 0; a < axes; ++a) total *= per_axis;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> coord(static_cast<std::size_t>(axes));
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int a = 0; a < axes; ++a) {
      const int i = static_cast<int>(rest % per_axis);
      rest /= per_axis;
      coord[a] = box[a].lo + (box[a].hi - box[a].lo) * i / (per_axis - 1);
    }
    Point p(dim);
    for (int d = 0; d < dim; ++d) p(d) = cplx(coord[2 * d], coord[2 * d + 1]);
    best = std::min(best, phi(p).value);
  }
  return best;
}

}  // namespace

Domain::Domain(std::string name, int dim, DefiningFunction phi, std::vector<Interval> bounding_box,
               Options options)
    : name_(std::move(name)),
      dim_(dim),
      phi_(std::move(phi)),
      box_(std::move(bounding_box)),
      symmetry_(options.symmetry),
      shape_(options.shape),
      radial_extent_(options.radial_extent) {
  if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("domain dimension must be 1 or 2");
  if (box_.size() != static_cast<std::size_t>(2 * dim_))
    throw std::invalid_argument("bounding box must have 2n intervals");
  for (const auto& iv : box_) {
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw std::invalid_argument("bounding box intervals must be finite and non-empty");
  }
  min_value_ = options.min_value ? *options.min_value : sampled_min(phi_, dim_, box_);
}

Jet Domain::jet(const Point& z) const {
  if (z.size() != dim_) throw std::invalid_argument("point dimension does not match domain");
  return phi_(z);
}

Domain make_disc(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
  Domain::Options o;
  o.symmetry = Symmetry::circular;
  o.shape = DiscShape{radius};
  o.radial_extent = RadialExtent{0.0, radius};
  o.min_value = -radius * radius;
  return Domain("disc", 1, sphere_function(1, radius), square_box(1, radius), o);
}

Domain make_annulus(double r_in, double r_out) {
  if (!(r_in > 0.0)) throw std::invalid_argument("annulus inner radius must be positive");
  if (!(r_in < r_out)) throw std::invalid_argument("annulus requires r_in < r_out");
  const double a2 = r_in * r_in;
  const double b2 = r_out * r_out;
  DefiningFunction phi = [a2, b2](const Point& z) {
    const double u = std::norm(z(0));
    Jet j;
    j.value = (u - a2) * (u - b2);
    const double dphi_du = 2.0 * u - a2 - b2;
    j.gradient = CVec::Constant(1, dphi_du * std::conj(z(0)));
    // d/dzbar (phi'(u) zbar) = phi''(u) |z|^2 + phi'(u)
    j.levi = CMat::Constant(1, 1, cplx(2.0 * u + dphi_du, 0.0));
    return j;
  };
  Domain::Options o;
  o.symmetry = Symmetry::circular;
  o.shape = AnnulusShape{r_in, r_out};
  o.radial_extent = RadialExtent{r_in, r_out};
  o.min_value = -0.25 * (b2 - a2) * (b2 - a2);
  return Domain("annulus", 1, std::move(phi), square_box(1, r_out), o);
}

Domain make_ball(int n, double radius) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("ball dimension must be 1 or 2");
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  Domain::Options o;
  o.symmetry = Symmetry::circular;
  o.shape = BallShape{n, radius};
  if (n == 1) o.radial_extent = RadialExtent{0.0, radius};
  o.min_value = -radius * radius;
  return Domain("ball", n, sphere_function(n, radius), square_box(n, radius), o);
}

Domain make_superellipse(int exponent) {
  if (exponent < 2 || exponent % 2 != 0)
    throw std::invalid_argument("superellipse exponent must be even and >= 2");
  const int p = exponent;
  DefiningFunction phi = [p](const Point& z) {
    const double x = z(0).real();
    const double y = z(0).imag();
    Jet j;
    j.value = std::pow(x, p) + std::pow(y, p) - 1.0;
    const double fx = p * std::pow(x, p - 1);
    const double fy = p * std::pow(y, p - 1);
    const double fxx = p * (p - 1) * std::pow(x, p - 2);
    const double fyy = p * (p - 1) * std::pow(y, p - 2);
    j.gradient = CVec::Constant(1, 0.5 * cplx(fx, -fy));
    j.levi = CMat::Constant(1, 1, cplx(0.25 * (fxx + fyy), 0.0));
    return j;
  };
  Domain::Options o;
  o.symmetry = Symmetry::none;
  o.min_value = -1.0;
  return Domain("superellipse", 1, std::move(phi), square_box(1, 1.0), o);
}

RadiusProfile profile_exp_re() {
  return {"exp_re", [](cplx s) { return std::exp(s.real()); }};
}

RadiusProfile profile_abs_one_plus_half() {
  return {"abs_one_plus_half", [](cplx s) { return std::abs(1.0 + 0.5 * s); }};
}

RadiusProfile profile_one_minus_half_abs2() {
  return {"one_minus_half_abs2", [](cplx s) { return 1.0 - 0.5 * std::norm(s); }};
}

RadiusProfile profile_one_plus_half_abs2() {
  return {"one_plus_half_abs2", [](cplx s) { return 1.0 + 0.5 * std::norm(s); }};
}

RadiusProfile profile_by_name(const std::string& name) {
  for (auto make : {profile_exp_re, profile_abs_one_plus_half, profile_one_minus_half_abs2,
                    profile_one_plus_half_abs2}) {
    RadiusProfile p = make();
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown radius profile '" + name + "'");
}

Domain make_hartogs_fiber(cplx s, const RadiusProfile& profile) {
  const double rho = profile.radius(s);
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("radius profile must be positive at s");
  Domain d = make_disc(rho);
  Domain::Options o;
  o.symmetry = Symmetry::circular;
  o.shape = DiscShape{rho};
  o.radial_extent = RadialExtent{0.0, rho};
  o.min_value = -rho * rho;
  return Domain("hartogs:" + profile.name, 1, d.defining_function(), d.bounding_box(), o);
}

LeviReport levi_check(const Domain& domain, int sample_count, unsigned long long seed) {
  if (sample_count < 1) throw std::invalid_argument("levi_check needs at least one sample");
  std::vector<Point> samples;
  samples.reserve(static_cast<std::size_t>(sample_count));
  if (domain.has_radial_structure()) {
    const auto [inner, outer] = *domain.radial_extent();
    // Open sweep from the inner to the outer boundary, so both ends get
    // near-boundary samples.
    for (int i = 0; i < sample_count; ++i) {
      const double t = (i + 0.5) / sample_count;
      const double r = inner + (outer - inner) * t;
      samples.push_back(make_point(std::polar(r, 0.7 * i)));
    }
  } else {
    std::mt19937_64 rng(seed);
    const auto& box = domain.bounding_box();
    int attempts = 0;
    while (static_cast<int>(samples.size()) < sample_count) {
      if (++attempts > 1000 * sample_count)
        throw std::runtime_error("levi_check could not sample interior points");
      Point p(domain.dim());
      for (int d = 0; d < domain.dim(); ++d) {
        std::uniform_real_distribution<double> ux(box[2 * d].lo, box[2 * d].hi);
        std::uniform_real_distribution<double> uy(box[2 * d + 1].lo, box[2 * d + 1].hi);
        p(d) = cplx(ux(rng), uy(rng));
      }
      if (domain.contains(p)) samples.push_back(p);
    }
  }

  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& p : samples) {
    const Jet j = domain.jet(p);
    if (!j.levi.allFinite()) throw std::runtime_error("complex Hessian evaluation failed");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(j.levi),
                                                       Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return {min_eig, min_eig > 0.0};
}

Domain SublevelDomain::as_domain() const {
  if (level == 0.0) return parent;
  const double c = level;
  const DefiningFunction base = parent.defining_function();
  DefiningFunction shifted = [base, c](const Point& z) {
    Jet j = base(z);
    j.value -= c;
    return j;
  };

  Domain::Options o;
  o.symmetry = parent.symmetry();
  o.min_value = parent.min_value() - c;
  std::vector<Interval> box = parent.bounding_box();

  if (const auto* d = std::get_if<DiscShape>(&parent.shape())) {
    const double r = std::sqrt(d->radius * d->radius + c);
    o.shape = DiscShape{r};
    o.radial_extent = RadialExtent{0.0, r};
    box = square_box(1, r);
  } else if (const auto* b = std::get_if<BallShape>(&parent.shape())) {
    const double r = std::sqrt(b->radius * b->radius + c);
    o.shape = BallShape{b->dim, r};
    if (b->dim == 1) o.radial_extent = RadialExtent{0.0, r};
    box = square_box(b->dim, r);
  } else if (const auto* a = std::get_if<AnnulusShape>(&parent.shape())) {
    // (u - a^2)(u - b^2) = c has two roots in u = |z|^2.
    const double a2 = a->inner * a->inner;
    const double b2 = a->outer * a->outer;
    const double disc = std::sqrt((a2 + b2) * (a2 + b2) - 4.0 * (a2 * b2 - c));
    const double inner = std::sqrt(0.5 * ((a2 + b2) - disc));
    const double outer = std::sqrt(0.5 * ((a2 + b2) + disc));
    o.shape = AnnulusShape{inner, outer};
    o.radial_extent = RadialExtent{inner, outer};
  } else if (parent.radial_extent()) {
    // Generic circular domain: locate the level set along the positive real axis.
    auto [inner, outer] = *parent.radial_extent();
    auto f = [&](double r) { return base(make_point(cplx(r, 0.0))).value - c; };
    auto bisect = [&](double lo, double hi) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((f(lo) < 0.0) == (f(mid) < 0.0) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    double rmin = inner;
    double best = f(inner);
    for (int i = 1; i <= 256; ++i) {
      const double r = inner + (outer - inner) * i / 256.0;
      if (f(r) < best) best = f(r), rmin = r;
    }
    const double new_inner = inner > 0.0 ? bisect(inner, rmin) : 0.0;
    o.radial_extent = RadialExtent{new_inner, bisect(rmin, outer)};
  }
  return Domain(parent.name() + ":sublevel", parent.dim(), std::move(shifted), std::move(box), o);
}

SublevelDomain sublevel(const Domain& domain, double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("sublevel value must be finite");
  if (c <= domain.min_value())
    throw std::invalid_argument("sublevel set {phi < c} is empty");
  if (c > 0.0) throw std::invalid_argument("sublevel value must be <= 0 to stay inside the domain");
  return SublevelDomain{domain, c};
}

}  // namespace bergflow
