#pragma once

#include <string>
#include <vector>

#include "vbsim/experiment.hpp"

namespace vbsim::cli {

/// Flat key=value run configuration.  Negative mean photon numbers mean
/// "derive from p_star as -ln(1 - p_star)".
struct RunConfig {
  std::string source = "coherent";  // coherent | poisson
  std::string drift = "fast";       // fast | frozen | clock
  double p_star = 0.85;
  double mean_photons_1 = -1.0;
  double mean_photons_2 = -1.0;
  double lambda1_nm = 635.01;
  double lambda2_nm = 635.0;
  double chi0_deg = 0.0;
  double eta = 1.0;
  double dark_mean = 0.0;
  double window_fs = 100.0;
  double dead_ns = 100.0;
  double theta_min_deg = 0.0;
  double theta_max_deg = 360.0;
  int theta_steps = 9;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 12345;
};

/// Parse a key=value file with # comments.  Reports offending line numbers.
RunConfig load_config_file(const std::string& path);

/// Serialize with 17 significant digits (round-trip exact for double).
std::string format_float(double v);

/// Dual-source click-probability surface over the angle/mean-photon grid.
/// Columns: theta_deg, mean_photons, p_coherent, p_poisson.
void cmd_surface(double mean_photons_max, int theta_steps, int m_steps,
                 const std::string& out);

/// Click-probability curves versus angle for a list of relative phases, at
/// the mean photon number fixed by the calibration click probability.
/// Columns: theta_deg, chi_deg, p_coherent, p_poisson.
void cmd_curves(const std::vector<double>& chi_deg_list, double mean_photons,
                int theta_steps, const std::string& out);

/// Monte-Carlo sweep with classification trailer.
/// Columns: theta_deg, trials, clicks, p_hat, std_err.
void cmd_experiment(const RunConfig& config, const std::string& out);

/// Cross-check suite: closed forms against brute-force matrix paths plus the
/// series identities.  Writes a CSV report, prints a table, and returns true
/// when every check passes.
bool cmd_verify(const std::string& out);

/// Entry point used by the binary; exit codes: 0 success, 1 verification
/// failure, 2 config error, 3 I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace vbsim::cli
