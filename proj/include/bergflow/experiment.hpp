#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bergflow/domain_io.hpp"
#include "bergflow/flow.hpp"

namespace bergflow {

enum class ExperimentKind { iterate, boundary_fit, exhaustion, variation, oracle_suite };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name, const std::string& path = "experiment");

struct GridConfig {
  std::string scheme = "auto";  // auto | radial | tensor
  int panels = 60;              // radial panels, or tensor panels per axis
  int points_per_panel = 20;
  double refinement_exponent = 3.0;
  int ring_size = 64;
};

struct DegreeConfig {
  bool use_default = true;
  int base = 0;
  double slope = 0.0;
  std::optional<int> cap;
  std::vector<int> table;

  DegreeSchedule schedule_for(const Domain& domain) const;
};

struct Thresholds {
  double final_error = 0.08;           // e_M
  double boundary_coefficient = 1e-3;  // |c^ - n!/pi^n| from the numerical kernel
  double boundary_exponent = 1e-3;     // |exponent + n + 1|
  double exhaustion_gap = 1e-3;        // |dV_last / dV_domain - 1| at the point
  double psh = 1e-6;                   // min eigenvalue >= -psh
};

struct BoundaryConfig {
  int degree = 120;
  double t_lo = 0.8;
  double t_hi = 0.97;
  int points = 64;
};

struct ExhaustionConfig {
  std::vector<double> levels;  // empty: radii 1 - 1/k scaled to the domain
  Point point = make_point(0.0);
};

struct VariationConfig {
  std::string profile = "exp_re";
  std::vector<cplx> parameter_nodes = {0.0, {0.2, 0.1}, {-0.3, 0.2}, {0.1, -0.4}};
  std::vector<double> fractions = {0.0, 0.3, 0.6};
  std::vector<double> angles = {0.0, 1.0};
  std::vector<int> steps = {1, 2, 3};
  double h = 1e-3;
  int degree = 400;
  int panels = 40;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::iterate;
  nlohmann::json domain_spec = {{"kind", "disc"}, {"radius", 1.0}};
  GridConfig grid;
  DegreeConfig degree;
  int M = 40;
  double compact_inner = 0.0;
  double compact_radius = 0.0;  // filled from the domain when absent
  std::filesystem::path output = "out";
  unsigned long long seed = 1;
  Thresholds thresholds;
  BoundaryConfig boundary;
  ExhaustionConfig exhaustion;
  VariationConfig variation;

  Domain domain() const { return domain_from_json(domain_spec); }
};

/// Parse and validate a JSON config; defaults are filled and unknown keys
/// rejected. Throws ConfigError with the field path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config(const nlohmann::json& j);

/// Defaults for one experiment kind on the unit disc.
ExperimentConfig default_config(ExperimentKind kind);

std::shared_ptr<const QuadratureGrid> build_grid(const Domain& domain, const GridConfig& grid);

struct ExperimentResult {
  bool passed = false;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// Runs the experiment, writing CSV files and summary.txt into config.output.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace bergflow
