#pragma once

#include "pdeit/dbar.hpp"
#include "pdeit/fem.hpp"
#include "pdeit/io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pdeit {

/// Parsed experiment description. Field defaults reproduce the stock trace
/// and reconstruction experiments; the phantom parameter defaults depend on
/// the phantom tag and are resolved at parse time.
struct ExperimentConfig {
  std::string phantom = "c2";  // c2 | disc | homogeneous
  double amplitude = 2.0;
  Complex center = Complex(0.3, 0.3);
  double rho = 0.4;
  std::vector<double> fractions = {1.0, 0.75, 0.5, 0.25};
  int L = 256;
  int refine = 6;
  int method = 1;
  std::vector<Complex> trace_ks = {Complex(0.5, 0.0), Complex(0.0, -4.0)};
  Complex u_trace_k = Complex(3.0, 3.0);
  std::vector<double> R_list = {3.0, 4.0};
  std::vector<double> dk_list = {0.25, 0.2};
  int zgrid_n = 64;
  double zgrid_half = 1.05;
  long long seed = 0;
  std::filesystem::path out = "out";
};

/// Read a key=value config file. Unknown keys raise std::invalid_argument;
/// absent keys keep the phantom-dependent defaults.
ExperimentConfig load_config(const std::filesystem::path& file);

/// Check every field against the preconditions of the modules the given
/// experiment will drive, before any solve starts. Throws
/// std::invalid_argument naming the offending field.
void validate_config(const ExperimentConfig& c, int test);

/// Conductivity field selected by the phantom tag and parameters.
ConductivityField config_phantom(const ExperimentConfig& c);

/// Outcome of one experiment: the ordered metrics manifest (also written to
/// <out>/manifest.txt), and whether every stage residual check passed.
struct MetricsReport {
  KeyValueFile manifest;
  std::filesystem::path manifest_file;
  bool checks_pass = false;
};

/// Experiment 1: boundary traces of the scalar exponentially growing
/// solutions. Computes volume-solver reference traces and full-arc traces
/// at each requested frequency, partial-arc traces for every fraction
/// below one, writes angle/value curve files and an error table, and
/// reports relative trace errors. Any stage failure aborts with a stage
/// tag in the exception message.
MetricsReport run_trace_comparison(const ExperimentConfig& c);

/// Experiment 2: conductivity reconstructions from off-diagonal frequency
/// data. Computes first-order-system traces at one display frequency, then
/// for each truncation radius and fraction runs the trace sweep, assembles
/// and fills the off-diagonal data, solves the matrix frequency-domain
/// system, recovers the conductivity, and writes data grids, graymap
/// images, reconstruction fields, metrics, and a summary table.
MetricsReport run_reconstruction(const ExperimentConfig& c);

}  // namespace pdeit
