#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bergflow/flow.hpp"
#include "bergflow/ke_reference.hpp"

namespace bergflow {

/// Plain CSV writer: optional '#' comment lines, one header row, then rows of
/// numbers printed with 17 significant digits (round-trip exact).
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, std::vector<std::string> columns,
            const std::vector<std::string>& comments = {});

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string format_number(double v);

/// node coordinates and Lebesgue weight: node_re, node_im, weight (node1_*, node2_* in C^2).
void write_grid_csv(const std::filesystem::path& file, const QuadratureGrid& grid);

/// node coordinates and log value; the comment line records the twist.
void write_log_field_csv(const std::filesystem::path& file, const LogDensityField& field, int dim);

/// m, degree, e_m, upper_margin, lower_margin, gram_condition, seconds.
void write_steps_csv(const std::filesystem::path& file, const ConvergenceReport& report);

/// Per-node coordinates with log kappa_m, log B_m and the log target.
void write_field_csv(const std::filesystem::path& file, const LogDensityField& log_kappa, int dim,
                     const VolumeFormField& target);

}  // namespace bergflow
