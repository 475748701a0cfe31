#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vbsim/optics.hpp"

namespace vbsim {

enum class SourceKind { Coherent, Poisson };

/// How the relative phase between the two beams behaves across trials.
/// Fast: redrawn uniformly every trial.  Frozen: pinned to chi_0.  Clock:
/// follows the deterministic drift chi(t) with trial windows spaced by
/// window + dead_time; the clock restarts at every angle setting.
enum class DriftMode { Fast, Frozen, Clock };

struct LaserPairConfig {
  double mean_photons_1 = 0.0;  ///< |alpha|^2 of beam 1
  double mean_photons_2 = 0.0;  ///< |beta|^2 of beam 2
  double lambda_1 = 635.01e-9;  ///< wavelength of beam 1 [m]
  double lambda_2 = 635.0e-9;   ///< wavelength of beam 2 [m]
  double chi_0 = 0.0;           ///< constant relative phase offset [rad]
  SourceKind source = SourceKind::Coherent;
};

/// On-off detector: quantum efficiency realized as a transmittivity-eta beam
/// splitter in front of an ideal detector, with a thermal state of mean
/// dark_mean_photons on the auxiliary port accounting for dark counts.
struct DetectorModel {
  double efficiency = 1.0;
  double dark_mean_photons = 0.0;
  double window = 100e-15;    ///< detection time window [s]
  double dead_time = 100e-9;  ///< recovery time after each window [s]
};

struct TrialPlan {
  std::vector<double> theta_grid;  ///< beam-splitter angles [rad]
  std::uint64_t trials_per_theta = 1;
  std::uint64_t seed = 0;
};

struct SweepRecord {
  double theta = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t clicks = 0;
  double p_hat = 0.0;
  double std_err = 0.0;  ///< sqrt(p_hat (1 - p_hat) / trials)
};

/// Counter-based random stream keyed by (seed, theta index, trial index).
/// Each trial owns an independent deterministic stream, so sweep results do
/// not depend on how trials are scheduled across threads.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t theta_index,
           std::uint64_t trial_index)
      : state_(mix(mix(mix(seed + kGamma) ^ theta_index) ^ trial_index)) {}

  /// Uniform double in [0, 1).
  double next_uniform() {
    state_ += kGamma;
    return static_cast<double>(mix(state_) >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }
  std::uint64_t state_;
};

/// omega_2 - omega_1 = 2 pi c (1/lambda_2 - 1/lambda_1) [rad/s].
double angular_freq_diff(double lambda_1, double lambda_2);

/// chi(t) = chi_0 - (omega_2 - omega_1) t, normalized into [0, 2 pi).
double chi_of_t(const LaserPairConfig& config, double t);

/// State reaching the ideal detector behind the efficiency beam splitter:
/// embed rho with a thermal dark mode, mix with transmittivity eta, reduce.
SingleModeState<double> effective_state_at_detector(
    const SingleModeState<double>& rho, const DetectorModel& det);

/// 1 - <0|.|0> of the effective state at the detector.
double click_probability(const SingleModeState<double>& rho,
                         const DetectorModel& det);

/// Closed-form click probability for a coherent state of the given mean
/// photon number entering the detector model.  Fast path for Monte-Carlo
/// trials; agrees with click_probability on coherent_density inputs.
double detector_click_prob_coherent(double mean_photons_at_port,
                                    const DetectorModel& det);

/// Closed-form click probability at output port 1 for a product of two
/// Poisson beams through the main beam splitter and then the detector model.
double detector_click_prob_poisson_pair(double mean_1, double mean_2,
                                        BeamSplitterSetting<double> setting,
                                        const DetectorModel& det);

/// Bernoulli-sample the click statistics over the angle grid.  Deterministic
/// for a given seed regardless of scheduling.
std::vector<SweepRecord> run_sweep(const TrialPlan& plan,
                                   const LaserPairConfig& lasers,
                                   const DetectorModel& det, DriftMode drift);

struct ClassifyResult {
  enum class Model { Coherent, Poisson, Inconclusive };
  Model model = Model::Inconclusive;
  double chi_hat = 0.0;  ///< fitted relative phase, folded into [0, pi]
  double m_hat = 0.0;    ///< fitted mean photon number of the winning model
  double rss_coherent = 0.0;
  double rss_poisson = 0.0;
};

/// Least-squares fit of a sweep against the coherent-pair curve
/// 1 - exp(-m (1 + sin(2 theta) cos(chi))) and the Poisson-pair curve
/// 1 - exp(-m) I0(m sin(2 theta)); the lower-residual model wins.
/// Inconclusive when the winning residual exceeds 0.8x the losing one.
/// Requires a theta span of at least 180 degrees sampled at most 45 degrees
/// apart unless require_span is false.
ClassifyResult classify_curve(std::span<const SweepRecord> records,
                              double calib_mean_photons,
                              bool require_span = true);

struct EvolvedAmplitude {
  ComplexAmplitude<double> amplitude;
  double global_phase = 0.0;  ///< physically irrelevant overall phase
};

/// Free evolution of a coherent parameter: magnitude unchanged, phase
/// advanced by -omega t, with the global phase -omega t / 2 kept aside.
EvolvedAmplitude coherent_time_evolution(const ComplexAmplitude<double>& alpha,
                                         double omega, double t);

}  // namespace vbsim
