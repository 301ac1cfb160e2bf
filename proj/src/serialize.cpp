#include "qst/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qst {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open for reading: " + path.string());
  }
  return is;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_density_text(std::ostream& os, const CMatrix& rho) {
  const Index d = rho.rows();
  if (d != rho.cols()) {
    throw std::invalid_argument("write_density_text: matrix not square");
  }
  os << "dim " << d << "\n";
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      os << i << " " << j << " " << format_double(rho(i, j).real()) << " "
         << format_double(rho(i, j).imag()) << "\n";
    }
  }
}

CMatrix read_density_text(std::istream& is) {
  std::string tag;
  Index d = 0;
  if (!(is >> tag >> d) || tag != "dim" || d < 1) {
    throw std::runtime_error("read_density_text: bad header");
  }
  CMatrix rho(d, d);
  for (Index k = 0; k < d * d; ++k) {
    Index i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(is >> i >> j >> re >> im) || i < 0 || i >= d || j < 0 || j >= d) {
      throw std::runtime_error("read_density_text: bad entry line");
    }
    rho(i, j) = Complex(re, im);
  }
  return rho;
}

void save_density(const std::filesystem::path& path, const CMatrix& rho) {
  auto os = open_out(path);
  write_density_text(os, rho);
}

CMatrix load_density(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_density_text(is);
}

void write_dataset_csv(std::ostream& os, const DataSet& data) {
  os << "index,value\n";
  for (const auto& e : data.entries) {
    os << e.operator_index << "," << format_double(e.value) << "\n";
  }
}

DataSet read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "index,value") {
    throw std::runtime_error("read_dataset_csv: bad header");
  }
  DataSet data;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("read_dataset_csv: bad row");
    }
    DataSet::Entry e;
    e.operator_index = std::stoi(line.substr(0, comma));
    e.value = std::stod(line.substr(comma + 1));
    data.entries.push_back(e);
  }
  return data;
}

void save_dataset(const std::filesystem::path& path, const DataSet& data) {
  auto os = open_out(path);
  write_dataset_csv(os, data);
}

DataSet load_dataset(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_dataset_csv(is);
}

void write_result_csv(std::ostream& os, const ReconstructionResult& result) {
  os << "iter,cum_time_s,loss,fidelity\n";
  const bool have_fid = !result.fidelity_trace.empty();
  for (size_t k = 0; k < result.recorded_iters.size(); ++k) {
    os << result.recorded_iters[k] << ","
       << format_double(result.time_trace[k]) << ","
       << format_double(result.loss_trace[k]) << ",";
    if (have_fid) os << format_double(result.fidelity_trace[k]);
    os << "\n";
  }
}

void save_result(const std::filesystem::path& path,
                 const ReconstructionResult& result) {
  auto os = open_out(path);
  write_result_csv(os, result);
}

void write_phase_grid_csv(std::ostream& os, const PhaseGrid& grid) {
  os << "x,y,w\n";
  for (int yi = 0; yi < grid.steps; ++yi) {
    for (int xi = 0; xi < grid.steps; ++xi) {
      os << format_double(grid.coordinate(xi)) << ","
         << format_double(grid.coordinate(yi)) << ","
         << format_double(grid.values(yi, xi)) << "\n";
    }
  }
}

void save_phase_grid(const std::filesystem::path& path, const PhaseGrid& grid) {
  auto os = open_out(path);
  write_phase_grid_csv(os, grid);
}

}  // namespace qst
