#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qst/measurement.hpp"
#include "qst/metrics.hpp"
#include "qst/optimize.hpp"
#include "qst/types.hpp"

namespace qst {

/// Shortest exact decimal form (17 significant digits): values round-trip
/// bitwise through the text formats below.
std::string format_double(double x);

/// Density-matrix text format: first line "dim <d>", then d*d lines
/// "<row> <col> <re> <im>" in row-major order.
void write_density_text(std::ostream& os, const CMatrix& rho);
CMatrix read_density_text(std::istream& is);
void save_density(const std::filesystem::path& path, const CMatrix& rho);
CMatrix load_density(const std::filesystem::path& path);

/// DataSet CSV: header "index,value", one row per entry.
void write_dataset_csv(std::ostream& os, const DataSet& data);
DataSet read_dataset_csv(std::istream& is);
void save_dataset(const std::filesystem::path& path, const DataSet& data);
DataSet load_dataset(const std::filesystem::path& path);

/// Reconstruction trace CSV: "iter,cum_time_s,loss,fidelity" with the
/// fidelity column blank when no truth was supplied.
void write_result_csv(std::ostream& os, const ReconstructionResult& result);
void save_result(const std::filesystem::path& path,
                 const ReconstructionResult& result);

/// PhaseGrid CSV: "x,y,w" rows, row-major (y outer, x inner).
void write_phase_grid_csv(std::ostream& os, const PhaseGrid& grid);
void save_phase_grid(const std::filesystem::path& path, const PhaseGrid& grid);

}  // namespace qst
