#include "vbsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vbsim {

namespace {

void validate_lasers(const LaserPairConfig& lasers) {
  if (!(lasers.mean_photons_1 >= 0.0) || !(lasers.mean_photons_2 >= 0.0))
    throw std::invalid_argument("mean photon numbers must be >= 0");
  if (!(lasers.lambda_1 > 0.0) || !(lasers.lambda_2 > 0.0))
    throw std::invalid_argument("wavelengths must be > 0");
}

void validate_detector(const DetectorModel& det) {
  if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0))
    throw std::invalid_argument("efficiency must lie in [0, 1]");
  if (!(det.dark_mean_photons >= 0.0))
    throw std::invalid_argument("dark mean photon number must be >= 0");
  if (!(det.window > 0.0) || !(det.dead_time >= 0.0))
    throw std::invalid_argument("window must be > 0 and dead time >= 0");
}

void validate_plan(const TrialPlan& plan) {
  if (plan.theta_grid.empty())
    throw std::invalid_argument("theta grid must not be empty");
  if (plan.trials_per_theta < 1)
    throw std::invalid_argument("need at least one trial per theta");
}

}  // namespace

double angular_freq_diff(double lambda_1, double lambda_2) {
  if (!(lambda_1 > 0.0) || !(lambda_2 > 0.0))
    throw std::invalid_argument("wavelengths must be > 0");
  return 2.0 * M_PI * kSpeedOfLight * (1.0 / lambda_2 - 1.0 / lambda_1);
}

double chi_of_t(const LaserPairConfig& config, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
  const double dw = angular_freq_diff(config.lambda_1, config.lambda_2);
  return normalize_angle(config.chi_0 - dw * t);
}

SingleModeState<double> effective_state_at_detector(
    const SingleModeState<double>& rho, const DetectorModel& det) {
  validate_detector(det);
  // The auxiliary mode is sized up to the signal cutoff so every populated
  // total-photon block of the mixing unitary is complete.
  Truncation aux_trunc =
      Truncation::for_thermal(det.dark_mean_photons, rho.trunc.tail_tol);
  aux_trunc.n_max = std::max(aux_trunc.n_max, rho.trunc.n_max);
  const SingleModeState<double> dark =
      thermal_state(det.dark_mean_photons, aux_trunc);
  const TwoModeState<double> joint = tensor_product(rho, dark);
  // transmittivity cos^2(theta) = eta
  const double theta = std::acos(std::sqrt(det.efficiency));
  return partial_trace_second(
      apply_vbs(BeamSplitterSetting<double>{theta}, joint));
}

double click_probability(const SingleModeState<double>& rho,
                         const DetectorModel& det) {
  return 1.0 - vacuum_probability(effective_state_at_detector(rho, det));
}

double detector_click_prob_coherent(double mean_photons_at_port,
                                    const DetectorModel& det) {
  // Averaging the ideal coherent vacuum probability over the thermal dark
  // mode: (1+nt)^-1 exp(-eta mean / (1+nt)) with nt = (1-eta) n_dark.
  const double nt = (1.0 - det.efficiency) * det.dark_mean_photons;
  return 1.0 -
         std::exp(-det.efficiency * mean_photons_at_port / (1.0 + nt)) /
             (1.0 + nt);
}

double detector_click_prob_poisson_pair(double mean_1, double mean_2,
                                        BeamSplitterSetting<double> setting,
                                        const DetectorModel& det) {
  const double nt = (1.0 - det.efficiency) * det.dark_mean_photons;
  const double c = std::cos(setting.theta);
  const double s = std::sin(setting.theta);
  const double scale = det.efficiency / (1.0 + nt);
  const double vac =
      std::exp(-scale * (mean_1 * c * c + mean_2 * s * s)) *
      bessel_i0(scale * std::sqrt(mean_1 * mean_2) *
                std::sin(2.0 * setting.theta)) /
      (1.0 + nt);
  return 1.0 - vac;
}

std::vector<SweepRecord> run_sweep(const TrialPlan& plan,
                                   const LaserPairConfig& lasers,
                                   const DetectorModel& det, DriftMode drift) {
  validate_plan(plan);
  validate_lasers(lasers);
  validate_detector(det);

  const double m1 = lasers.mean_photons_1;
  const double m2 = lasers.mean_photons_2;
  std::vector<SweepRecord> records;
  records.reserve(plan.theta_grid.size());

  for (std::size_t ti = 0; ti < plan.theta_grid.size(); ++ti) {
    const double theta = plan.theta_grid[ti];
    const BeamSplitterSetting<double> setting{theta};
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // port-1 coherent mean: base + cross cos(chi)
    const double base = m1 * c * c + m2 * s * s;
    const double cross = std::sqrt(m1 * m2) * std::sin(2.0 * theta);
    const double p_poisson =
        detector_click_prob_poisson_pair(m1, m2, setting, det);
    const double p_frozen =
        detector_click_prob_coherent(base + cross * std::cos(lasers.chi_0), det);
    const double window_spacing = det.window + det.dead_time;

    std::uint64_t clicks = 0;
    for (std::uint64_t j = 0; j < plan.trials_per_theta; ++j) {
      TrialRng rng(plan.seed, ti, j);
      double p = 0.0;
      if (lasers.source == SourceKind::Poisson) {
        p = p_poisson;  // relative phase has no effect on the Poisson pair
      } else {
        switch (drift) {
          case DriftMode::Fast: {
            const double chi = 2.0 * M_PI * rng.next_uniform();
            p = detector_click_prob_coherent(base + cross * std::cos(chi), det);
            break;
          }
          case DriftMode::Frozen:
            p = p_frozen;
            break;
          case DriftMode::Clock: {
            const double chi =
                chi_of_t(lasers, static_cast<double>(j) * window_spacing);
            p = detector_click_prob_coherent(base + cross * std::cos(chi), det);
            break;
          }
        }
      }
      if (rng.next_uniform() < p) ++clicks;
    }

    SweepRecord rec;
    rec.theta = theta;
    rec.trials = plan.trials_per_theta;
    rec.clicks = clicks;
    rec.p_hat = static_cast<double>(clicks) / static_cast<double>(rec.trials);
    rec.std_err = std::sqrt(rec.p_hat * (1.0 - rec.p_hat) /
                            static_cast<double>(rec.trials));
    records.push_back(rec);
  }
  return records;
}

namespace {

double coherent_model(double theta, double m, double chi) {
  return 1.0 - std::exp(-m * (1.0 + std::sin(2.0 * theta) * std::cos(chi)));
}

double poisson_model(double theta, double m) {
  return 1.0 - std::exp(-m) * bessel_i0(m * std::sin(2.0 * theta));
}

}  // namespace

ClassifyResult classify_curve(std::span<const SweepRecord> records,
                              double calib_mean_photons, bool require_span) {
  if (records.size() < 2)
    throw std::invalid_argument("need at least two sweep records");
  if (!(calib_mean_photons > 0.0))
    throw std::invalid_argument("calibration mean photon number must be > 0");

  std::vector<double> thetas, y;
  thetas.reserve(records.size());
  y.reserve(records.size());
  for (const auto& r : records) {
    thetas.push_back(r.theta);
    y.push_back(r.p_hat);
  }
  std::vector<std::size_t> order(thetas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return thetas[a] < thetas[b]; });

  if (require_span) {
    const double span = thetas[order.back()] - thetas[order.front()];
    if (span < M_PI - 1e-9)
      throw InsufficientSpanError(
          "sweep must span at least 180 degrees of beam-splitter angle");
    for (std::size_t i = 1; i < order.size(); ++i)
      if (thetas[order[i]] - thetas[order[i - 1]] > M_PI / 4.0 + 1e-9)
        throw InsufficientSpanError(
            "sweep points must be at most 45 degrees apart");
  }

  const auto rss_coherent = [&](double m, double chi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double d = y[i] - coherent_model(thetas[i], m, chi);
      acc += d * d;
    }
    return acc;
  };
  const auto rss_poisson = [&](double m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double d = y[i] - poisson_model(thetas[i], m);
      acc += d * d;
    }
    return acc;
  };

  const double m_lo = 0.1;
  const double m_hi = std::max(4.0, 2.0 * calib_mean_photons);
  constexpr int kGrid = 64;
  const double dm = (m_hi - m_lo) / (kGrid - 1);
  const double dchi = 2.0 * M_PI / kGrid;

  // coarse grid, then derivative-free local refinement
  double best_m_c = m_lo, best_chi = 0.0, best_rss_c =
      std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i)
    for (int j = 0; j < kGrid; ++j) {
      const double m = m_lo + dm * i;
      const double chi = dchi * j;
      const double r = rss_coherent(m, chi);
      if (r < best_rss_c) {
        best_rss_c = r;
        best_m_c = m;
        best_chi = chi;
      }
    }
  double hm = dm, hchi = dchi;
  for (int round = 0; round < 48; ++round) {
    double bm = best_m_c, bc = best_chi;
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j) {
        const double m = std::max(1e-6, bm + hm * i / 4.0);
        const double chi = bc + hchi * j / 4.0;
        const double r = rss_coherent(m, chi);
        if (r < best_rss_c) {
          best_rss_c = r;
          best_m_c = m;
          best_chi = chi;
        }
      }
    hm *= 0.6;
    hchi *= 0.6;
  }

  double best_m_p = m_lo, best_rss_p = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double m = m_lo + dm * i;
    const double r = rss_poisson(m);
    if (r < best_rss_p) {
      best_rss_p = r;
      best_m_p = m;
    }
  }
  hm = dm;
  for (int round = 0; round < 48; ++round) {
    const double bm = best_m_p;
    for (int i = -4; i <= 4; ++i) {
      const double m = std::max(1e-6, bm + hm * i / 4.0);
      const double r = rss_poisson(m);
      if (r < best_rss_p) {
        best_rss_p = r;
        best_m_p = m;
      }
    }
    hm *= 0.6;
  }

  ClassifyResult result;
  result.rss_coherent = best_rss_c;
  result.rss_poisson = best_rss_p;
  double chi_folded = normalize_angle(best_chi);
  if (chi_folded > M_PI) chi_folded = 2.0 * M_PI - chi_folded;

  const double better = std::min(best_rss_c, best_rss_p);
  const double worse = std::max(best_rss_c, best_rss_p);
  // margin rule: near-degenerate residuals give no verdict
  if (worse <= 0.0 || better > 0.8 * worse) {
    result.model = ClassifyResult::Model::Inconclusive;
    result.chi_hat = chi_folded;
    result.m_hat = best_rss_c <= best_rss_p ? best_m_c : best_m_p;
    return result;
  }
  if (best_rss_c < best_rss_p) {
    result.model = ClassifyResult::Model::Coherent;
    result.chi_hat = chi_folded;
    result.m_hat = best_m_c;
  } else {
    result.model = ClassifyResult::Model::Poisson;
    result.m_hat = best_m_p;
  }
  return result;
}

EvolvedAmplitude coherent_time_evolution(const ComplexAmplitude<double>& alpha,
                                         double omega, double t) {
  if (!(omega >= 0.0))
    throw std::invalid_argument("angular frequency must be >= 0");
  EvolvedAmplitude out;
  out.amplitude =
      ComplexAmplitude<double>(alpha.magnitude, alpha.phase - omega * t);
  out.global_phase = normalize_angle(-omega * t / 2.0);
  return out;
}

}  // namespace vbsim
