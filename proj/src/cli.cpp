#include "vbsim/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace vbsim::cli {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file: " + path);
  return f;
}

void finish_output(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(int line_no, const std::string& what) {
  throw ConfigError("line " + std::to_string(line_no) + ": " + what);
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               int line_no) {
  const auto as_double = [&]() {
    try {
      std::size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      config_fail(line_no, "bad numeric value '" + value + "' for key '" + key + "'");
    }
  };
  const auto as_u64 = [&]() {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
      config_fail(line_no, "bad integer value '" + value + "' for key '" + key + "'");
    }
  };

  if (key == "source") cfg.source = value;
  else if (key == "drift") cfg.drift = value;
  else if (key == "p_star") cfg.p_star = as_double();
  else if (key == "mean_photons_1") cfg.mean_photons_1 = as_double();
  else if (key == "mean_photons_2") cfg.mean_photons_2 = as_double();
  else if (key == "lambda1_nm") cfg.lambda1_nm = as_double();
  else if (key == "lambda2_nm") cfg.lambda2_nm = as_double();
  else if (key == "chi0_deg") cfg.chi0_deg = as_double();
  else if (key == "eta") cfg.eta = as_double();
  else if (key == "dark_mean") cfg.dark_mean = as_double();
  else if (key == "window_fs") cfg.window_fs = as_double();
  else if (key == "dead_ns") cfg.dead_ns = as_double();
  else if (key == "theta_min_deg") cfg.theta_min_deg = as_double();
  else if (key == "theta_max_deg") cfg.theta_max_deg = as_double();
  else if (key == "theta_steps") cfg.theta_steps = static_cast<int>(as_u64());
  else if (key == "trials") cfg.trials = as_u64();
  else if (key == "seed") cfg.seed = as_u64();
  else config_fail(line_no, "unknown key '" + key + "'");
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < steps; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
  return grid;
}

}  // namespace

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_fail(line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_fail(line_no, "empty key");
    apply_key(cfg, key, value, line_no);
  }
  return cfg;
}

void cmd_surface(double mean_photons_max, int theta_steps, int m_steps,
                 const std::string& out) {
  if (theta_steps < 2 || m_steps < 2)
    throw ConfigError("surface needs at least 2 steps per axis");
  if (!(mean_photons_max > 0.0))
    throw ConfigError("mean photon range must be positive");
  std::ofstream f = open_output(out);
  f << "theta_deg,mean_photons,p_coherent,p_poisson\n";
  for (const double theta_deg : linear_grid(0.0, 360.0, theta_steps)) {
    const BeamSplitterSetting<double> setting{theta_deg * kDegToRad};
    for (const double m : linear_grid(0.0, mean_photons_max, m_steps)) {
      const double p_c = 1.0 - vacuum_prob_coherent_phase(m, 0.0, setting);
      const double p_p =
          1.0 - vacuum_prob_poisson(std::sqrt(m), std::sqrt(m), setting);
      f << format_float(theta_deg) << ',' << format_float(m) << ','
        << format_float(p_c) << ',' << format_float(p_p) << '\n';
    }
  }
  finish_output(f, out);
}

void cmd_curves(const std::vector<double>& chi_deg_list, double mean_photons,
                int theta_steps, const std::string& out) {
  if (theta_steps < 2) throw ConfigError("curves need at least 2 theta steps");
  if (chi_deg_list.empty()) throw ConfigError("curves need at least one chi");
  if (!(mean_photons > 0.0))
    throw ConfigError("mean photon number must be positive");
  std::ofstream f = open_output(out);
  f << "theta_deg,chi_deg,p_coherent,p_poisson\n";
  for (const double chi_deg : chi_deg_list) {
    for (const double theta_deg : linear_grid(0.0, 360.0, theta_steps)) {
      const BeamSplitterSetting<double> setting{theta_deg * kDegToRad};
      const double p_c =
          1.0 - vacuum_prob_coherent_phase(mean_photons, chi_deg * kDegToRad,
                                           setting);
      const double p_p = 1.0 - vacuum_prob_poisson(std::sqrt(mean_photons),
                                                   std::sqrt(mean_photons),
                                                   setting);
      f << format_float(theta_deg) << ',' << format_float(chi_deg) << ','
        << format_float(p_c) << ',' << format_float(p_p) << '\n';
    }
  }
  finish_output(f, out);
}

void cmd_experiment(const RunConfig& config, const std::string& out) {
  if (!(config.p_star > 0.0 && config.p_star < 1.0))
    throw ConfigError("p_star must lie in (0, 1)");
  if (config.theta_steps < 1) throw ConfigError("theta_steps must be >= 1");

  LaserPairConfig lasers;
  if (config.source == "coherent") lasers.source = SourceKind::Coherent;
  else if (config.source == "poisson") lasers.source = SourceKind::Poisson;
  else throw ConfigError("source must be 'coherent' or 'poisson'");

  DriftMode drift;
  if (config.drift == "fast") drift = DriftMode::Fast;
  else if (config.drift == "frozen") drift = DriftMode::Frozen;
  else if (config.drift == "clock") drift = DriftMode::Clock;
  else throw ConfigError("drift must be 'fast', 'frozen' or 'clock'");

  const double m_star = -std::log1p(-config.p_star);
  lasers.mean_photons_1 =
      config.mean_photons_1 < 0.0 ? m_star : config.mean_photons_1;
  lasers.mean_photons_2 =
      config.mean_photons_2 < 0.0 ? m_star : config.mean_photons_2;
  lasers.lambda_1 = config.lambda1_nm * 1e-9;
  lasers.lambda_2 = config.lambda2_nm * 1e-9;
  lasers.chi_0 = config.chi0_deg * kDegToRad;

  DetectorModel det;
  det.efficiency = config.eta;
  det.dark_mean_photons = config.dark_mean;
  det.window = config.window_fs * 1e-15;
  det.dead_time = config.dead_ns * 1e-9;

  const std::vector<double> theta_deg =
      linear_grid(config.theta_min_deg, config.theta_max_deg, config.theta_steps);
  TrialPlan plan;
  plan.trials_per_theta = config.trials;
  plan.seed = config.seed;
  plan.theta_grid.reserve(theta_deg.size());
  for (const double d : theta_deg) plan.theta_grid.push_back(d * kDegToRad);

  const std::vector<SweepRecord> records =
      run_sweep(plan, lasers, det, drift);

  std::ofstream f = open_output(out);
  f << "theta_deg,trials,clicks,p_hat,std_err\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    f << format_float(theta_deg[i]) << ',' << std::to_string(r.trials) << ','
      << std::to_string(r.clicks) << ',' << format_float(r.p_hat) << ','
      << format_float(r.std_err) << '\n';
  }

  const double calib = 0.5 * (lasers.mean_photons_1 + lasers.mean_photons_2);
  try {
    const ClassifyResult verdict = classify_curve(records, calib);
    switch (verdict.model) {
      case ClassifyResult::Model::Coherent:
        f << "# verdict=coherent chi_hat_deg="
          << format_float(verdict.chi_hat / kDegToRad)
          << " m_hat=" << format_float(verdict.m_hat) << '\n';
        break;
      case ClassifyResult::Model::Poisson:
        f << "# verdict=poisson m_hat=" << format_float(verdict.m_hat) << '\n';
        break;
      case ClassifyResult::Model::Inconclusive:
        f << "# verdict=inconclusive\n";
        break;
    }
  } catch (const InsufficientSpanError& e) {
    f << "# verdict=unavailable " << e.what() << '\n';
  }
  finish_output(f, out);
}

namespace {

struct Check {
  std::string name;
  double value;
  double bound;
  bool upper;  // pass iff (upper ? value <= bound : value >= bound)

  bool pass() const { return upper ? value <= bound : value >= bound; }
};

double brute_vacuum_coherent(double lam_a, double phi_a, double lam_b,
                             double phi_b, double theta) {
  // shared cutoff sized for the total mean keeps every populated
  // total-photon block complete
  const Truncation tr = Truncation::for_mean_photons(lam_a + lam_b);
  const auto a =
      coherent_density(ComplexAmplitude<double>(std::sqrt(lam_a), phi_a), tr);
  const auto b =
      coherent_density(ComplexAmplitude<double>(std::sqrt(lam_b), phi_b), tr);
  const auto outp =
      apply_vbs(BeamSplitterSetting<double>{theta}, tensor_product(a, b));
  return vacuum_probability(partial_trace_second(outp));
}

double brute_vacuum_poisson(double lam_a, double lam_b, double theta) {
  const Truncation tr = Truncation::for_mean_photons(lam_a + lam_b);
  const auto outp = apply_vbs(
      BeamSplitterSetting<double>{theta},
      tensor_product(poisson_state(lam_a, tr), poisson_state(lam_b, tr)));
  return vacuum_probability(partial_trace_second(outp));
}

double brute_split_pipeline(double lam, double theta) {
  const Truncation tr = Truncation::for_mean_photons(lam);
  const auto joint =
      tensor_product(poisson_state(lam, tr), poisson_state(0.0, tr));
  const auto mid = apply_vbs(BeamSplitterSetting<double>{M_PI / 4.0}, joint);
  const auto outp = apply_vbs(BeamSplitterSetting<double>{theta}, mid);
  return vacuum_probability(partial_trace_second(outp));
}

}  // namespace

bool cmd_verify(const std::string& out) {
  std::vector<Check> checks;
  const double m_star = -std::log(0.15);

  {
    double worst6 = 0.0, worst8 = 0.0, worst9 = 0.0;
    for (int i = 0; i < 8; ++i) {
      TrialRng rng(777, static_cast<std::uint64_t>(i), 0);
      const double lam_a = 2.5 * rng.next_uniform();
      const double lam_b = 2.5 * rng.next_uniform();
      const double theta = 2.0 * M_PI * rng.next_uniform();
      const double chi = 2.0 * M_PI * rng.next_uniform();
      const BeamSplitterSetting<double> setting{theta};

      const double closed6 = vacuum_prob_coherent(
          ComplexAmplitude<double>(std::sqrt(lam_a), 0.0),
          ComplexAmplitude<double>(std::sqrt(lam_b), chi), setting);
      worst6 = std::max(
          worst6,
          std::abs(closed6 - brute_vacuum_coherent(lam_a, 0.0, lam_b, chi, theta)));

      const double closed8 =
          vacuum_prob_poisson(std::sqrt(lam_a), std::sqrt(lam_b), setting);
      worst8 = std::max(
          worst8, std::abs(closed8 - brute_vacuum_poisson(lam_a, lam_b, theta)));

      const double closed9 = vacuum_prob_coherent_phase(lam_a, chi, setting);
      worst9 = std::max(
          worst9,
          std::abs(closed9 - brute_vacuum_coherent(lam_a, 0.0, lam_a, chi, theta)));
    }
    checks.push_back({"coherent-vacuum-closed-vs-brute", worst6, 1e-10, true});
    checks.push_back({"poisson-vacuum-closed-vs-brute", worst8, 1e-10, true});
    checks.push_back({"equal-amplitude-phase-closed-vs-brute", worst9, 1e-10, true});
  }

  {
    const Truncation tr = Truncation::for_mean_photons(2.0);
    const BeamSplitterSetting<double> setting{M_PI / 4.0};
    const auto direct = poisson_output_direct(1.0, 1.0, setting, tr);
    const auto conj = apply_vbs(
        setting, tensor_product(poisson_state(1.0, tr), poisson_state(1.0, tr)));
    checks.push_back({"direct-sum-vs-unitary-conjugation",
                      (direct.entries - conj.entries).cwiseAbs().maxCoeff(),
                      1e-10, true});
  }

  {
    double worst = check_bessel_identities(1.2, 0.7, 80);
    for (double a = 0.0; a <= 2.0; a += 0.5)
      for (double b = 0.0; b <= 2.0; b += 0.5)
        worst = std::max(worst, static_cast<double>(check_bessel_identities(a, b, 80)));
    checks.push_back({"squared-binomial-series-identities", worst, 1e-10, true});
  }

  {
    const auto split =
        reduced_state_after_5050(1.0, Truncation::for_mean_photons(1.0));
    checks.push_back(
        {"split-5050-reduced-is-poisson", split.poisson_residual, 1e-12, true});
    checks.push_back({"split-5050-joint-offdiagonal",
                      split.joint_max_offdiagonal, 0.01, false});
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double theta = 2.0 * M_PI * i / 64.0;
      const BeamSplitterSetting<double> setting{theta};
      const double split = split_poisson_vbs_vacuum_prob(1.0, setting);
      const double amp = std::sqrt(0.5);
      const double coh = vacuum_prob_coherent(
          ComplexAmplitude<double>(amp, 0.0),
          ComplexAmplitude<double>(amp, M_PI), setting);
      worst = std::max(worst, std::abs(split - coh));
    }
    checks.push_back({"split-pipeline-formula-identity", worst, 1e-14, true});
    const double brute = brute_split_pipeline(1.0, 0.6);
    checks.push_back(
        {"split-pipeline-vs-brute",
         std::abs(split_poisson_vbs_vacuum_prob(1.0, BeamSplitterSetting<double>{0.6}) -
                  brute),
         1e-10, true});
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
      TrialRng rng(778, static_cast<std::uint64_t>(i), 0);
      const double ma = std::sqrt(2.5 * rng.next_uniform());
      const double mb = std::sqrt(2.5 * rng.next_uniform());
      const double theta = 2.0 * M_PI * rng.next_uniform();
      const BeamSplitterSetting<double> setting{theta};
      worst = std::max(worst,
                       std::abs(phase_averaged_vacuum_prob(ma, mb, setting) -
                                vacuum_prob_poisson(ma, mb, setting)));
    }
    checks.push_back({"phase-average-collapse", worst, 1e-9, true});
  }

  {
    // mean of e^{cos x} over a period against the series
    long double acc = 0.0L;
    constexpr int n = 4096;
    for (int k = 0; k < n; ++k)
      acc += std::exp(std::cos(2.0L * M_PI * k / n));
    const double quad = static_cast<double>(acc / n);
    checks.push_back({"cosine-exponential-quadrature",
                      std::abs(quad - bessel_i0(1.0)), 1e-12, true});
  }

  {
    const BeamSplitterSetting<double> flat{0.0}, half{M_PI / 4.0};
    const double p0 = 1.0 - vacuum_prob_coherent_phase(m_star, 0.0, flat);
    const double p45 = 1.0 - vacuum_prob_coherent_phase(m_star, 0.0, half);
    const double ptilde45 =
        vacuum_prob_poisson(std::sqrt(m_star), std::sqrt(m_star), half);
    const double quad45 =
        phase_averaged_vacuum_prob(std::sqrt(m_star), std::sqrt(m_star), half, 2048);
    const double worst =
        std::max({std::abs(p0 - 0.85), std::abs(p45 - 0.9775),
                  std::abs(ptilde45 - quad45)});
    checks.push_back({"anchor-values", worst, 1e-12, true});
  }

  {
    double worst_c = 0.0, worst_p = 0.0;
    const double ms = std::sqrt(m_star);
    for (int i = 0; i < 360; ++i) {
      const double theta = 2.0 * M_PI * i / 360.0;
      worst_c = std::max(
          worst_c,
          std::abs(vacuum_prob_coherent_phase(m_star, 0.0,
                                              BeamSplitterSetting<double>{theta}) -
                   vacuum_prob_coherent_phase(
                       m_star, 0.0, BeamSplitterSetting<double>{theta + M_PI})));
      worst_p = std::max(
          worst_p,
          std::abs(vacuum_prob_poisson(ms, ms, BeamSplitterSetting<double>{theta}) -
                   vacuum_prob_poisson(
                       ms, ms, BeamSplitterSetting<double>{theta + M_PI / 2.0})));
    }
    checks.push_back({"coherent-periodicity-180deg", worst_c, 1e-12, true});
    checks.push_back({"poisson-periodicity-90deg", worst_p, 1e-12, true});
  }

  {
    const double dw = angular_freq_diff(635.01e-9, 635.0e-9);
    checks.push_back({"freq-diff-relative-error",
                      std::abs(dw - 4.67e10) / 4.67e10, 5e-3, true});
    const double periods =
        std::abs(angular_freq_diff(635.1e-9, 635.0e-9)) * 100e-15 /
        (2.0 * M_PI);
    checks.push_back({"window-phase-relative-error",
                      std::abs(periods - 0.00744) / 0.00744, 2e-2, true});
  }

  std::ofstream f = open_output(out);
  f << "check,value,bound,direction,status\n";
  bool all_pass = true;
  for (const auto& c : checks) {
    const bool ok = c.pass();
    all_pass = all_pass && ok;
    f << c.name << ',' << format_float(c.value) << ',' << format_float(c.bound)
      << ',' << (c.upper ? "max" : "min") << ',' << (ok ? "pass" : "FAIL")
      << '\n';
    std::printf("%-40s %12.3e %s %8.0e   %s\n", c.name.c_str(), c.value,
                c.upper ? "<=" : ">=", c.bound, ok ? "pass" : "FAIL");
  }
  finish_output(f, out);
  std::printf("%s\n", all_pass ? "all checks passed" : "CHECKS FAILED");
  return all_pass;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"photon statistics of a variable beam splitter with coherent "
               "or phase-mixed inputs"};
  app.require_subcommand(1);

  auto* s_surface =
      app.add_subcommand("surface", "click-probability surface over (theta, mean photons)");
  double surf_p_star = 0.85;
  int surf_theta_steps = 181, surf_m_steps = 40;
  std::string surf_out;
  s_surface->add_option("--p-star", surf_p_star,
                        "single-beam click probability fixing the mean-photon range");
  s_surface->add_option("--theta-steps", surf_theta_steps, "grid points over [0, 360] deg");
  s_surface->add_option("--m-steps", surf_m_steps, "grid points over the mean-photon range");
  s_surface->add_option("--out", surf_out, "output CSV path")->required();

  auto* s_curves =
      app.add_subcommand("curves", "click-probability curves for a list of relative phases");
  double curves_p_star = 0.85;
  int curves_theta_steps = 361;
  std::vector<double> curves_chi;
  std::string curves_out;
  s_curves->add_option("--p-star", curves_p_star,
                       "single-beam click probability fixing the mean photon number");
  s_curves->add_option("--theta-steps", curves_theta_steps, "grid points over [0, 360] deg");
  s_curves->add_option("--chi-deg", curves_chi,
                       "relative phases in degrees (default 0, 11.25, ..., 90)");
  s_curves->add_option("--out", curves_out, "output CSV path")->required();

  auto* s_exp = app.add_subcommand("experiment",
                                   "Monte-Carlo two-laser sweep with classification");
  std::string exp_config, exp_out;
  RunConfig flags;
  std::uint64_t flag_trials = 0, flag_seed = 0;
  s_exp->add_option("--config", exp_config, "key=value configuration file");
  s_exp->add_option("--out", exp_out, "output CSV path")->required();
  s_exp->add_option("--source", flags.source, "coherent | poisson");
  s_exp->add_option("--drift", flags.drift, "fast | frozen | clock");
  s_exp->add_option("--p-star", flags.p_star, "single-beam click probability");
  s_exp->add_option("--mean-photons-1", flags.mean_photons_1);
  s_exp->add_option("--mean-photons-2", flags.mean_photons_2);
  s_exp->add_option("--lambda1-nm", flags.lambda1_nm);
  s_exp->add_option("--lambda2-nm", flags.lambda2_nm);
  s_exp->add_option("--chi0-deg", flags.chi0_deg);
  s_exp->add_option("--eta", flags.eta, "detector quantum efficiency");
  s_exp->add_option("--dark-mean", flags.dark_mean, "dark mean photon number");
  s_exp->add_option("--window-fs", flags.window_fs);
  s_exp->add_option("--dead-ns", flags.dead_ns);
  s_exp->add_option("--theta-min", flags.theta_min_deg);
  s_exp->add_option("--theta-max", flags.theta_max_deg);
  s_exp->add_option("--theta-steps", flags.theta_steps);
  s_exp->add_option("--trials", flag_trials);
  s_exp->add_option("--seed", flag_seed);

  auto* s_verify = app.add_subcommand("verify", "run the cross-check suite");
  std::string verify_out = "verify_report.csv";
  s_verify->add_option("--out", verify_out, "report CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (s_surface->parsed()) {
      if (!(surf_p_star > 0.0 && surf_p_star < 1.0))
        throw ConfigError("p_star must lie in (0, 1)");
      cmd_surface(-std::log1p(-surf_p_star), surf_theta_steps, surf_m_steps,
                  surf_out);
      return 0;
    }
    if (s_curves->parsed()) {
      if (!(curves_p_star > 0.0 && curves_p_star < 1.0))
        throw ConfigError("p_star must lie in (0, 1)");
      if (curves_chi.empty())
        for (int k = 0; k <= 8; ++k) curves_chi.push_back(11.25 * k);
      cmd_curves(curves_chi, -std::log1p(-curves_p_star), curves_theta_steps,
                 curves_out);
      return 0;
    }
    if (s_exp->parsed()) {
      RunConfig cfg =
          exp_config.empty() ? RunConfig{} : load_config_file(exp_config);
      if (s_exp->count("--source")) cfg.source = flags.source;
      if (s_exp->count("--drift")) cfg.drift = flags.drift;
      if (s_exp->count("--p-star")) cfg.p_star = flags.p_star;
      if (s_exp->count("--mean-photons-1")) cfg.mean_photons_1 = flags.mean_photons_1;
      if (s_exp->count("--mean-photons-2")) cfg.mean_photons_2 = flags.mean_photons_2;
      if (s_exp->count("--lambda1-nm")) cfg.lambda1_nm = flags.lambda1_nm;
      if (s_exp->count("--lambda2-nm")) cfg.lambda2_nm = flags.lambda2_nm;
      if (s_exp->count("--chi0-deg")) cfg.chi0_deg = flags.chi0_deg;
      if (s_exp->count("--eta")) cfg.eta = flags.eta;
      if (s_exp->count("--dark-mean")) cfg.dark_mean = flags.dark_mean;
      if (s_exp->count("--window-fs")) cfg.window_fs = flags.window_fs;
      if (s_exp->count("--dead-ns")) cfg.dead_ns = flags.dead_ns;
      if (s_exp->count("--theta-min")) cfg.theta_min_deg = flags.theta_min_deg;
      if (s_exp->count("--theta-max")) cfg.theta_max_deg = flags.theta_max_deg;
      if (s_exp->count("--theta-steps")) cfg.theta_steps = flags.theta_steps;
      if (s_exp->count("--trials")) cfg.trials = flag_trials;
      if (s_exp->count("--seed")) cfg.seed = flag_seed;
      cmd_experiment(cfg, exp_out);
      return 0;
    }
    if (s_verify->parsed()) return cmd_verify(verify_out) ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vbsim::cli
