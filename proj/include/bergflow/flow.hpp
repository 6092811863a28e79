#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bergflow/bergman.hpp"

namespace bergflow {

struct VolumeFormField;

/// Basis degree used at step m: either base + ceil(slope * m) (optionally
/// capped) or an explicit table indexed by m - 1.
class DegreeSchedule {
 public:
  static DegreeSchedule linear(int base, double slope, std::optional<int> cap = std::nullopt);
  static DegreeSchedule table(std::vector<int> degrees);
  /// Defaults: 8000 + 80m on planar circular domains (truncation error of the
  /// weight compounds from step to step), 15 + m capped at 60 elsewhere.
  static DegreeSchedule default_for(const Domain& domain);

  /// Throws std::out_of_range when a table schedule is exhausted.
  int degree(int m) const;
  std::string describe() const;

 private:
  int base_ = 40;
  double slope_ = 2.0;
  std::optional<int> cap_;
  std::vector<int> table_;
};

struct StepRecord {
  int m = 0;
  int degree = 0;
  double gram_condition = 1.0;
  double seconds = 0.0;
};

/// State of the iteration K_1 = K(Omega), K_{m+1} = K(Omega, (m+1)K, h_m),
/// h_m = K_m^{-1}. Fields live on the iteration nodes: the radial nodes of a
/// radial grid, the grid nodes otherwise.
struct IterationState {
  int m = 0;
  std::shared_ptr<const QuadratureGrid> grid;
  DegreeSchedule schedule;
  LogDensityField log_kappa;
  GramSystem gram;
  std::vector<StepRecord> history;

  const Domain& domain() const { return grid->domain; }
};

NodeSetPtr iteration_nodes(const QuadratureGrid& grid);

IterationState init_state(std::shared_ptr<const QuadratureGrid> grid, DegreeSchedule schedule);

IterationState step(const IterationState& state);

/// log B_m = (log kappa_m - n log m!) / m.
struct NormalizedKernel {
  int m = 0;
  NodeSetPtr nodes;
  std::vector<double> log_values;
};

NormalizedKernel normalized(const IterationState& state);
NormalizedKernel normalized(const LogDensityField& log_kappa, int dim);

/// Compact band {inner <= |z| <= outer} (Euclidean norm in C^n).
struct CompactSet {
  double inner = 0.0;
  double outer = 0.8;
};

struct StepError {
  int m = 0;
  int degree = 0;
  double sup_error = 0.0;  // e_m = sup |log B_m - log((2 pi)^{-n} target)|
  double max_signed = 0.0;
  double min_signed = 0.0;
  double gram_condition = 1.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string target_description;
  CompactSet compact;
  std::vector<StepError> steps;
  /// Least-squares fit e_m ~ intercept + slope * (log m) / m over m >= 2.
  double slope = 0.0;
  double intercept = 0.0;
};

/// Signed deviation log B_m - log((2 pi)^{-n} target) at the nodes inside the compact set.
std::vector<double> signed_deviation(const NormalizedKernel& b, const VolumeFormField& target,
                                     int dim, const CompactSet& compact);

StepError measure_step(const IterationState& state, const VolumeFormField& target,
                       const CompactSet& compact);

using StepObserver = std::function<void(const IterationState&, const StepError&)>;

ConvergenceReport run(std::shared_ptr<const QuadratureGrid> grid, int max_step,
                      DegreeSchedule schedule, const VolumeFormField& target, CompactSet compact,
                      const StepObserver& observer = {});

struct SandwichRow {
  int m = 0;
  double upper_margin = 0.0;  // sup of the signed deviation (limsup side)
  double lower_margin = 0.0;  // inf of the signed deviation (liminf side)
};

std::vector<SandwichRow> sandwich_diagnostic(const ConvergenceReport& report);

}  // namespace bergflow
