#include "bergflow/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "bergflow/ke_reference.hpp"

namespace bergflow {

DegreeSchedule DegreeSchedule::linear(int base, double slope, std::optional<int> cap) {
  if (base < 0 || slope < 0.0) throw std::invalid_argument("degree schedule must be non-negative");
  DegreeSchedule s;
  s.base_ = base;
  s.slope_ = slope;
  s.cap_ = cap;
  return s;
}

DegreeSchedule DegreeSchedule::table(std::vector<int> degrees) {
  if (degrees.empty()) throw std::invalid_argument("degree table is empty");
  DegreeSchedule s;
  s.table_ = std::move(degrees);
  return s;
}

DegreeSchedule DegreeSchedule::default_for(const Domain& domain) {
  if (domain.has_radial_structure()) return linear(8000, 80.0);
  return linear(15, 1.0, 60);
}

int DegreeSchedule::degree(int m) const {
  if (m < 1) throw std::out_of_range("degree requested for step < 1");
  if (!table_.empty()) {
    if (static_cast<std::size_t>(m) > table_.size()) {
      std::ostringstream msg;
      msg << "degree schedule exhausted at step " << m << " (table has " << table_.size() << " entries)";
      throw std::out_of_range(msg.str());
    }
    return table_[m - 1];
  }
  const int d = base_ + static_cast<int>(std::ceil(slope_ * m - 1e-12));
  return cap_ ? std::min(d, *cap_) : d;
}

std::string DegreeSchedule::describe() const {
  std::ostringstream out;
  if (!table_.empty()) {
    out << "table[" << table_.size() << "]";
  } else {
    out << base_ << "+ceil(" << slope_ << "*m)";
    if (cap_) out << " cap " << *cap_;
  }
  return out.str();
}

NodeSetPtr iteration_nodes(const QuadratureGrid& grid) {
  return grid.radial_nodes ? grid.radial_nodes : grid.nodes;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

IterationState init_state(std::shared_ptr<const QuadratureGrid> grid, DegreeSchedule schedule) {
  const auto t0 = Clock::now();
  const NodeSetPtr nodes = iteration_nodes(*grid);
  const Domain& domain = grid->domain;
  const SectionBasis basis = basis_for(domain, 1, schedule.degree(1));
  GramSystem gram = assemble_gram(basis, unit_weight(nodes), *grid);
  LogDensityField kappa = kernel_diagonal(gram, nodes);
  kappa.twist = 1;
  IterationState s{1, std::move(grid), std::move(schedule), std::move(kappa), std::move(gram), {}};
  s.history.push_back({1, basis.degree, s.gram.condition_estimate(), seconds_since(t0)});
  return s;
}

IterationState step(const IterationState& state) {
  const auto t0 = Clock::now();
  const int next = state.m + 1;
  const SectionBasis basis = basis_for(state.domain(), next, state.schedule.degree(next));
  GramSystem gram = assemble_gram(basis, state.log_kappa, *state.grid);
  LogDensityField kappa = kernel_diagonal(gram, state.log_kappa.nodes);
  kappa.twist = next;
  IterationState s{next, state.grid, state.schedule, std::move(kappa), std::move(gram), state.history};
  s.history.push_back({next, basis.degree, s.gram.condition_estimate(), seconds_since(t0)});
  return s;
}

NormalizedKernel normalized(const LogDensityField& log_kappa, int dim) {
  const int m = log_kappa.twist;
  if (m < 1) throw std::invalid_argument("normalization needs twist >= 1");
  const double log_fact = dim * std::lgamma(m + 1.0);
  NormalizedKernel b{m, log_kappa.nodes, {}};
  b.log_values.reserve(log_kappa.log_values.size());
  for (double v : log_kappa.log_values) b.log_values.push_back((v - log_fact) / m);
  return b;
}

NormalizedKernel normalized(const IterationState& state) {
  return normalized(state.log_kappa, state.domain().dim());
}

std::vector<double> signed_deviation(const NormalizedKernel& b, const VolumeFormField& target, int dim,
                                     const CompactSet& compact) {
  if (b.nodes->size() != target.nodes->size() || target.log_density.size() != b.log_values.size())
    throw std::invalid_argument("target is not defined at the kernel nodes");
  const double shift = dim * std::log(2.0 * kPi);
  std::vector<double> dev;
  for (std::size_t i = 0; i < b.nodes->size(); ++i) {
    const double r = std::sqrt(norm2((*b.nodes)[i]));
    if (r < compact.inner || r > compact.outer) continue;
    dev.push_back(b.log_values[i] - (target.log_density[i] - shift));
  }
  if (dev.empty()) throw std::invalid_argument("compact set contains no nodes");
  return dev;
}

StepError measure_step(const IterationState& state, const VolumeFormField& target, const CompactSet& compact) {
  const auto dev = signed_deviation(normalized(state), target, state.domain().dim(), compact);
  const auto [lo, hi] = std::minmax_element(dev.begin(), dev.end());
  const StepRecord& rec = state.history.back();
  StepError e;
  e.m = state.m;
  e.degree = rec.degree;
  e.max_signed = *hi;
  e.min_signed = *lo;
  e.sup_error = std::max(std::abs(*hi), std::abs(*lo));
  e.gram_condition = rec.gram_condition;
  e.seconds = rec.seconds;
  return e;
}

ConvergenceReport run(std::shared_ptr<const QuadratureGrid> grid, int max_step, DegreeSchedule schedule,
                      const VolumeFormField& target, CompactSet compact, const StepObserver& observer) {
  if (max_step < 1) throw std::invalid_argument("M must be >= 1");
  if (!(compact.outer > compact.inner)) throw std::invalid_argument("compact band is empty");
  ConvergenceReport rep;
  rep.target_description = to_string(target.provenance);
  rep.compact = compact;
  IterationState state = init_state(std::move(grid), std::move(schedule));
  for (;;) {
    const StepError e = measure_step(state, target, compact);
    rep.steps.push_back(e);
    if (observer) observer(state, e);
    if (state.m >= max_step) break;
    state = step(state);
  }
  // e_m ~ intercept + slope * log(m)/m, least squares over m >= 2
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& e : rep.steps) {
    if (e.m < 2) continue;
    const double x = std::log(double(e.m)) / e.m;
    sx += x, sy += e.sup_error, sxx += x * x, sxy += x * e.sup_error;
    ++count;
  }
  if (count >= 2) {
    const double den = count * sxx - sx * sx;
    rep.slope = (count * sxy - sx * sy) / den;
    rep.intercept = (sy - rep.slope * sx) / count;
  }
  return rep;
}

std::vector<SandwichRow> sandwich_diagnostic(const ConvergenceReport& report) {
  if (report.steps.empty()) throw std::invalid_argument("sandwich diagnostic of an empty report");
  std::vector<SandwichRow> rows;
  rows.reserve(report.steps.size());
  for (const auto& e : report.steps) rows.push_back({e.m, e.max_signed, e.min_signed});
  return rows;
}

}  // namespace bergflow
