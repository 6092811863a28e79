#include "bergflow/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bergflow {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& file, std::vector<std::string> columns,
                     const std::vector<std::string>& comments)
    : out_(file), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + file.string() + " for writing");
  for (const auto& c : comments) out_ << "# " << c << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (filled_ == columns_) throw std::logic_error("too many CSV cells in row");
  out_ << (filled_++ ? "," : "") << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("incomplete CSV row");
  out_ << '\n';
  filled_ = 0;
}

namespace {

std::vector<std::string> coordinate_columns(int dim) {
  if (dim == 1) return {"node_re", "node_im"};
  std::vector<std::string> cols;
  for (int i = 1; i <= dim; ++i) {
    cols.push_back("node" + std::to_string(i) + "_re");
    cols.push_back("node" + std::to_string(i) + "_im");
  }
  return cols;
}

void coordinates(CsvWriter& w, const Point& z) {
  for (Eigen::Index k = 0; k < z.size(); ++k) w.cell(z(k).real()).cell(z(k).imag());
}

}  // namespace

void write_grid_csv(const std::filesystem::path& file, const QuadratureGrid& grid) {
  auto cols = coordinate_columns(grid.domain.dim());
  cols.emplace_back("weight");
  CsvWriter w(file, cols);
  for (std::size_t i = 0; i < grid.nodes->size(); ++i) {
    coordinates(w, (*grid.nodes)[i]);
    w.cell(grid.weights[i]).end_row();
  }
}

void write_log_field_csv(const std::filesystem::path& file, const LogDensityField& field, int dim) {
  auto cols = coordinate_columns(dim);
  cols.emplace_back("log_value");
  CsvWriter w(file, cols, {"twist = " + std::to_string(field.twist)});
  for (std::size_t i = 0; i < field.nodes->size(); ++i) {
    coordinates(w, (*field.nodes)[i]);
    w.cell(field.log_values[i]).end_row();
  }
}

void write_steps_csv(const std::filesystem::path& file, const ConvergenceReport& report) {
  CsvWriter w(file, {"m", "degree", "e_m", "upper_margin", "lower_margin", "gram_condition", "seconds"});
  for (const auto& e : report.steps) {
    w.cell(e.m).cell(e.degree).cell(e.sup_error).cell(e.max_signed).cell(e.min_signed);
    w.cell(e.gram_condition).cell(e.seconds);
    w.end_row();
  }
}

void write_field_csv(const std::filesystem::path& file, const LogDensityField& log_kappa, int dim,
                     const VolumeFormField& target) {
  auto cols = coordinate_columns(dim);
  for (const char* c : {"log_kappa", "log_B", "log_target"}) cols.emplace_back(c);
  const NormalizedKernel b = normalized(log_kappa, dim);
  const double shift = dim * std::log(2.0 * kPi);
  CsvWriter w(file, cols,
              {"m = " + std::to_string(log_kappa.twist), "target provenance: " + to_string(target.provenance),
               "densities against Lambda = 2^n Lebesgue; log_target = log((2 pi)^-n dV_E)"});
  for (std::size_t i = 0; i < log_kappa.nodes->size(); ++i) {
    const Point& z = (*log_kappa.nodes)[i];
    coordinates(w, z);
    w.cell(log_kappa.log_values[i]).cell(b.log_values[i]).cell(target.log_density[i] - shift);
    w.end_row();
  }
}

}  // namespace bergflow
