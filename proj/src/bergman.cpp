#include "bergflow/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bergflow {

namespace {

// Terms more than this many nats below the running maximum are dropped from
// log-sum-exp reductions; exp(-45) is below double rounding of the sum.
constexpr double kLogCutoff = 45.0;

double log_sum_exp_shifted(const std::vector<double>& values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  const double floor = m - kLogCutoff;
  double s = 0.0;
  for (double v : values)
    if (v > floor) s += std::exp(v - m);
  return m + std::log(s);
}

cplx monomial(const Point& z, const MultiIndex& alpha, int dim) {
  cplx v(1.0, 0.0);
  for (int d = 0; d < dim; ++d) {
    const int e = alpha[static_cast<std::size_t>(d)];
    if (e >= 0) {
      for (int i = 0; i < e; ++i) v *= z(d);
    } else {
      for (int i = 0; i < -e; ++i) v /= z(d);
    }
  }
  return v;
}

}  // namespace

SectionBasis monomial_basis(int n, int twist, int degree) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("basis dimension must be 1 or 2");
  if (degree < 0) throw std::invalid_argument("basis degree must be >= 0");
  SectionBasis b;
  b.dim = n;
  b.twist = twist;
  b.degree = degree;
  if (n == 1) {
    for (int k = 0; k <= degree; ++k) b.exponents.push_back({k, 0});
  } else {
    for (int total = 0; total <= degree; ++total)
      for (int a = total; a >= 0; --a) b.exponents.push_back({a, total - a});
  }
  return b;
}

SectionBasis laurent_basis(int twist, int degree) {
  if (degree < 0) throw std::invalid_argument("basis degree must be >= 0");
  SectionBasis b;
  b.dim = 1;
  b.twist = twist;
  b.degree = degree;
  b.laurent = true;
  for (int k = -degree; k <= degree; ++k) b.exponents.push_back({k, 0});
  return b;
}

SectionBasis basis_for(const Domain& domain, int twist, int degree) {
  if (domain.has_radial_structure() && domain.radial_extent()->inner > 0.0)
    return laurent_basis(twist, degree);
  return monomial_basis(domain.dim(), twist, degree);
}

LogDensityField unit_weight(NodeSetPtr nodes) {
  LogDensityField f;
  f.twist = 0;
  f.log_values.assign(nodes->size(), 0.0);
  f.nodes = std::move(nodes);
  return f;
}

// ---------------------------------------------------------------------------
// GramSystem

GramSystem::GramSystem(SectionBasis basis, Domain domain)
    : basis_(std::move(basis)), domain_(std::move(domain)) {}

GramSystem GramSystem::diagonal(SectionBasis basis, Domain domain,
                                std::vector<double> log_diagonal) {
  if (basis.dim != 1) throw std::invalid_argument("diagonal Gram systems are planar");
  if (log_diagonal.size() != basis.size())
    throw std::invalid_argument("diagonal size does not match basis");
  GramSystem g(std::move(basis), std::move(domain));
  g.diagonal_ = true;
  g.log_diag_ = std::move(log_diagonal);
  for (const auto& e : g.basis_.exponents) g.exponent_.push_back(e[0]);
  for (double v : g.log_diag_)
    if (!std::isfinite(v)) throw GramError("non-finite Gram diagonal (under-resolved quadrature)", 0.0);
  g.condition_ = 1.0;
  return g;
}

GramSystem GramSystem::dense(SectionBasis basis, Domain domain, double log_scale,
                             Eigen::VectorXd log_diagonal, Eigen::MatrixXcd unit_matrix) {
  GramSystem g(std::move(basis), std::move(domain));
  g.diagonal_ = false;
  g.log_scale_ = log_scale;
  g.log_diag_.assign(log_diagonal.data(), log_diagonal.data() + log_diagonal.size());
  for (double& v : g.log_diag_) v += log_scale;
  g.unit_ = std::move(unit_matrix);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.unit_, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  g.condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0))
    throw GramError("Gram matrix is not positive definite (degree too high or quadrature too coarse)",
                    g.condition_);
  if (g.condition_ > kGramConditionLimit)
    throw GramError("Gram condition number exceeds guard", g.condition_);
  g.llt_.compute(g.unit_);
  if (g.llt_.info() != Eigen::Success)
    throw GramError("Cholesky factorization of Gram matrix failed", g.condition_);
  return g;
}

Eigen::MatrixXcd GramSystem::matrix() const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(0.5 * log_diag_[static_cast<std::size_t>(i)]);
  if (diagonal_) return d.cwiseAbs2().cast<cplx>().asDiagonal();
  return d.asDiagonal() * unit_ * d.asDiagonal();
}

Eigen::MatrixXcd GramSystem::factor() const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(0.5 * log_diag_[static_cast<std::size_t>(i)]);
  if (diagonal_) return d.cast<cplx>().asDiagonal();
  return d.asDiagonal() * Eigen::MatrixXcd(llt_.matrixL());
}

Eigen::VectorXcd GramSystem::scaled_evaluation(const Point& z, double& log_offset) const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  Eigen::VectorXcd beta(n);
  if (diagonal_) {
    // beta_k = z^k exp(-g_k/2), computed as magnitude and phase.
    const double r = std::abs(z(0));
    const double theta = std::arg(z(0));
    const double lr = r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity();
    std::vector<double> lmag(static_cast<std::size_t>(n));
    double m = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double k = exponent_[static_cast<std::size_t>(i)];
      const double l = (k == 0.0 ? 0.0 : k * lr) - 0.5 * log_diag_[static_cast<std::size_t>(i)];
      lmag[static_cast<std::size_t>(i)] = l;
      m = std::max(m, l);
    }
    log_offset = m;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double k = exponent_[static_cast<std::size_t>(i)];
      beta(i) = std::polar(std::exp(lmag[static_cast<std::size_t>(i)] - m), k * theta);
    }
    return beta;
  }
  log_offset = -0.5 * log_scale_;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ld = 0.5 * (log_diag_[static_cast<std::size_t>(i)] - log_scale_);
    beta(i) = monomial(z, basis_.exponents[static_cast<std::size_t>(i)], basis_.dim) * std::exp(-ld);
  }
  return beta;
}

double GramSystem::log_kernel(const Point& z) const {
  if (diagonal_) {
    const double r = std::abs(z(0));
    if (r == 0.0) {
      for (std::size_t i = 0; i < exponent_.size(); ++i)
        if (exponent_[i] == 0.0) return -log_diag_[i];
      return -std::numeric_limits<double>::infinity();
    }
    const double two_lr = 2.0 * std::log(r);
    const std::size_t n = exponent_.size();
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, exponent_[i] * two_lr - log_diag_[i]);
    const double floor = m - kLogCutoff;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = exponent_[i] * two_lr - log_diag_[i];
      if (v > floor) s += std::exp(v - m);
    }
    return m + std::log(s);
  }
  double offset = 0.0;
  const Eigen::VectorXcd beta = scaled_evaluation(z, offset);
  const Eigen::VectorXcd x = llt_.matrixL().solve(beta);
  const double q = x.squaredNorm();
  if (!(q > 0.0)) return -std::numeric_limits<double>::infinity();
  return 2.0 * offset + std::log(q);
}

double GramSystem::log_section_ratio(const Eigen::VectorXcd& y, const Point& z) const {
  if (y.size() != static_cast<Eigen::Index>(basis_.size()))
    throw std::invalid_argument("coefficient vector does not match basis");
  const double norm2 = diagonal_ ? y.squaredNorm() : (y.adjoint() * unit_.transpose() * y)(0).real();
  if (!(norm2 > 0.0)) throw std::invalid_argument("zero section has no unit normalization");
  double offset = 0.0;
  const Eigen::VectorXcd beta = scaled_evaluation(z, offset);
  const cplx value = y.transpose() * beta;
  return 2.0 * offset + std::log(std::norm(value)) - std::log(norm2);
}

Eigen::VectorXcd GramSystem::extremal_coefficients(const Point& z) const {
  double offset = 0.0;
  const Eigen::VectorXcd beta = scaled_evaluation(z, offset);
  if (diagonal_) return beta.conjugate();
  return llt_.solve(beta).conjugate();
}

// ---------------------------------------------------------------------------

GramSystem assemble_gram(const SectionBasis& basis, const LogDensityField& weight,
                         const QuadratureGrid& grid) {
  if (weight.twist != basis.twist - 1)
    throw std::invalid_argument("weight twist must equal basis twist - 1");
  if (basis.dim != grid.domain.dim()) throw std::invalid_argument("basis and domain dimensions differ");
  const double log_lambda = basis.dim * std::log(2.0);

  if (grid.radial_nodes && weight.nodes.get() == grid.radial_nodes.get()) {
    if (basis.dim != 1) throw std::invalid_argument("radial path is planar");
    const RadialRule& rule = *grid.radial;
    const std::size_t q = rule.radii.size();
    if (weight.log_values.size() != q) throw std::invalid_argument("weight field size mismatch");
    std::vector<double> base(q);
    std::vector<double> two_lr(q);
    for (std::size_t j = 0; j < q; ++j) {
      const double r = rule.radii[j];
      base[j] = log_lambda + std::log(2.0 * kPi * rule.weights[j] * r) - weight.log_values[j];
      two_lr[j] = 2.0 * std::log(r);
    }
    std::vector<double> log_diag;
    log_diag.reserve(basis.size());
    std::vector<double> buf(q);
    for (const auto& e : basis.exponents) {
      const double k = e[0];
      for (std::size_t j = 0; j < q; ++j) buf[j] = base[j] + k * two_lr[j];
      log_diag.push_back(log_sum_exp_shifted(buf));
    }
    return GramSystem::diagonal(basis, grid.domain, std::move(log_diag));
  }

  if (weight.nodes.get() != grid.nodes.get())
    throw std::invalid_argument("weight field must live on the grid nodes");
  const NodeSet& nodes = *grid.nodes;
  const std::size_t q = nodes.size();
  if (weight.log_values.size() != q) throw std::invalid_argument("weight field size mismatch");

  // Factor the largest log-weight out of the sum.
  std::vector<double> lw(q);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < q; ++j) {
    lw[j] = log_lambda + std::log(grid.weights[j]) - weight.log_values[j];
    top = std::max(top, lw[j]);
  }
  const auto nb = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd rows(static_cast<Eigen::Index>(q), nb);
  for (std::size_t j = 0; j < q; ++j) {
    const double sw = std::exp(0.5 * (lw[j] - top));
    for (Eigen::Index a = 0; a < nb; ++a)
      rows(static_cast<Eigen::Index>(j), a) = sw * monomial(nodes[j], basis.exponents[static_cast<std::size_t>(a)], basis.dim);
  }
  // G_ab = sum_j w_j z^a conj(z^b): with rows R_{ja} = sqrt(w_j) z_j^a this is R^T conj(R).
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(nb, nb);
  g.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  Eigen::MatrixXcd full = g.selfadjointView<Eigen::Lower>();
  Eigen::VectorXd ld(nb);
  for (Eigen::Index a = 0; a < nb; ++a) {
    const double d = full(a, a).real();
    if (!(d > 0.0)) throw GramError("Gram matrix has a non-positive diagonal entry", 0.0);
    ld(a) = std::log(d);
  }
  Eigen::MatrixXcd unit(nb, nb);
  for (Eigen::Index a = 0; a < nb; ++a)
    for (Eigen::Index b = 0; b < nb; ++b)
      unit(a, b) = full(a, b) * std::exp(-0.5 * (ld(a) + ld(b)));
  for (Eigen::Index a = 0; a < nb; ++a) unit(a, a) = 1.0;
  return GramSystem::dense(basis, grid.domain, top, ld, std::move(unit));
}

LogDensityField kernel_diagonal(const GramSystem& gram, NodeSetPtr eval_points) {
  LogDensityField out;
  out.twist = gram.basis().twist;
  out.log_values.reserve(eval_points->size());
  for (const auto& z : *eval_points) {
    if (!gram.domain().contains(z))
      throw std::domain_error("kernel evaluation point lies outside the domain");
    out.log_values.push_back(gram.log_kernel(z));
  }
  out.nodes = std::move(eval_points);
  return out;
}

double weighted_disc_kernel_closed_form(double s, cplx z, double scale) {
  if (!(s >= 0.0)) throw std::invalid_argument("weight exponent must be nonnegative");
  if (!(scale > 0.0)) throw std::invalid_argument("measure scale must be positive");
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw std::domain_error("closed-form disc kernel needs |z| < 1");
  return (s + 1.0) / (scale * kPi) * std::pow(1.0 - r2, -(s + 2.0));
}

double section_ratio(const GramSystem& gram, double log_kappa, const Eigen::VectorXcd& y,
                     const Point& z) {
  return std::exp(gram.log_section_ratio(y, z) - log_kappa);
}

ExtremalReport extremal_check(const LogDensityField& kernel, const GramSystem& gram,
                              const Point& point, int trials, unsigned long long seed) {
  const NodeSet& nodes = *kernel.nodes;
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Point& p) {
    return p.size() == point.size() && (p - point).norm() == 0.0;
  });
  if (it == nodes.end()) throw std::invalid_argument("extremal_check point is not a kernel node");
  const double log_kappa = kernel.log_values[static_cast<std::size_t>(it - nodes.begin())];

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto nb = static_cast<Eigen::Index>(gram.basis().size());
  ExtremalReport report;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd y(nb);
    for (Eigen::Index i = 0; i < nb; ++i) y(i) = cplx(normal(rng), normal(rng));
    report.max_ratio = std::max(report.max_ratio, section_ratio(gram, log_kappa, y, point));
  }
  report.extremal_ratio = section_ratio(gram, log_kappa, gram.extremal_coefficients(point), point);
  return report;
}

}  // namespace bergflow
