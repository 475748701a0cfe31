#include <doctest.h>

#include <functional>

#include "support/oracles.hpp"
#include "vbsim/experiment.hpp"

using namespace vbsim;

namespace {

const double kMStar = -std::log(0.15);

std::vector<double> nine_point_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 9; ++i) grid.push_back(2.0 * M_PI * i / 8.0);
  return grid;
}

std::vector<SweepRecord> synthetic_records(
    const std::function<double(double)>& curve, int n_points = 9,
    double theta_lo = 0.0, double theta_hi = 2.0 * M_PI) {
  std::vector<SweepRecord> records;
  for (int i = 0; i < n_points; ++i) {
    SweepRecord r;
    r.theta = theta_lo + (theta_hi - theta_lo) * i / (n_points - 1);
    r.trials = 1;
    r.p_hat = curve(r.theta);
    records.push_back(r);
  }
  return records;
}

double ideal_poisson_click(double mean, double theta) {
  return 1.0 - vacuum_prob_poisson(std::sqrt(mean), std::sqrt(mean),
                                   BeamSplitterSetting<double>{theta});
}

double ideal_coherent_click(double mean, double chi, double theta) {
  return 1.0 -
         vacuum_prob_coherent_phase(mean, chi, BeamSplitterSetting<double>{theta});
}

}  // namespace

TEST_CASE("trial rng streams are deterministic and uniform-ish") {
  TrialRng a(7, 3, 11), b(7, 3, 11), c(7, 3, 12);
  CHECK(a.next_uniform() == b.next_uniform());
  CHECK(a.next_uniform() == b.next_uniform());
  CHECK(a.next_uniform() != c.next_uniform());
  double acc = 0.0;
  TrialRng d(1, 0, 0);
  for (int i = 0; i < 20000; ++i) {
    const double u = d.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    acc += u;
  }
  CHECK(std::abs(acc / 20000 - 0.5) < 0.01);
}

TEST_CASE("angular frequency difference") {
  CHECK(angular_freq_diff(635e-9, 635e-9) == 0.0);
  const double dw = angular_freq_diff(635.01e-9, 635e-9);
  CHECK(std::abs(dw - oracles::kFreqDiffHundredthNm) < 1.0);
  CHECK(std::abs(dw - 4.67e10) / 4.67e10 < 0.005);
  // a tenth-of-a-nanometer detuning moves the phase by 0.744% of a turn
  // within a 100 fs window
  const double periods =
      std::abs(angular_freq_diff(635.1e-9, 635e-9)) * 100e-15 / (2.0 * M_PI);
  CHECK(std::abs(periods - oracles::kPhasePeriods100fs) < 1e-14);
  CHECK(std::abs(periods - 0.00744) / 0.00744 < 0.02);
  CHECK_THROWS_AS(angular_freq_diff(0.0, 635e-9), std::invalid_argument);
}

TEST_CASE("relative phase drift over time") {
  LaserPairConfig cfg;
  cfg.chi_0 = 1.25;
  cfg.lambda_1 = 635.01e-9;
  cfg.lambda_2 = 635e-9;
  CHECK(chi_of_t(cfg, 0.0) == doctest::Approx(1.25));
  // about 7.4e3 full turns elapse within a microsecond at this detuning
  const double dw = angular_freq_diff(cfg.lambda_1, cfg.lambda_2);
  const double turns = dw * 1e-6 / (2.0 * M_PI);
  CHECK(turns > 7000.0);
  CHECK(turns < 7800.0);
  // linear drift: equal steps advance the phase equally (mod one turn)
  const double d1 = normalize_angle(chi_of_t(cfg, 2e-13) - chi_of_t(cfg, 1e-13));
  const double d2 = normalize_angle(chi_of_t(cfg, 1e-13) - chi_of_t(cfg, 0.0));
  CHECK(std::abs(d1 - d2) < 1e-6);
  CHECK_THROWS_AS(chi_of_t(cfg, -1.0), std::invalid_argument);
}

TEST_CASE("effective state at the detector") {
  const Truncation tr = Truncation::for_mean_photons(1.9);
  const auto coh = coherent_density(ComplexAmplitude<double>(std::sqrt(1.9), 0.0), tr);

  SUBCASE("ideal detector passes the state through") {
    DetectorModel det;  // efficiency 1, no dark counts
    const auto out = effective_state_at_detector(coh, det);
    CHECK((out.entries - coh.entries).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("dead detector sees vacuum") {
    DetectorModel det;
    det.efficiency = 0.0;
    const auto out = effective_state_at_detector(coh, det);
    CHECK(std::abs(vacuum_probability(out) - 1.0) < 1e-12);
  }

  SUBCASE("partial efficiency rescales a coherent beam") {
    DetectorModel det;
    det.efficiency = 0.6;
    const auto out = effective_state_at_detector(coh, det);
    CHECK(std::abs(vacuum_probability(out) - std::exp(-0.6 * 1.9)) < 1e-12);
    const auto expected = coherent_density(
        ComplexAmplitude<double>(std::sqrt(0.6 * 1.9), 0.0), tr);
    // entrywise agreement is limited by the input cutoff: amplitudes at the
    // boundary scale like sqrt(tail_tol) ~ 1e-7
    CHECK((out.entries - expected.entries).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("click probability") {
  const Truncation tr = Truncation::for_mean_photons(kMStar);
  DetectorModel ideal;

  CHECK(click_probability(poisson_state(0.0, tr), ideal) < 1e-14);
  // the calibration point: a single beam of mean -ln(0.15) clicks with 0.85
  CHECK(std::abs(click_probability(poisson_state(kMStar, tr), ideal) - 0.85) <
        1e-12);
  CHECK(std::abs(click_probability(
                     coherent_density(ComplexAmplitude<double>(std::sqrt(kMStar), 0.9), tr),
                     ideal) -
                 0.85) < 1e-12);
}

TEST_CASE("closed-form detector probabilities match the matrix pipeline") {
  DetectorModel det;
  det.efficiency = 0.62;
  det.dark_mean_photons = 0.08;

  SUBCASE("coherent input") {
    for (const double mean : {0.0, 0.4, 1.3, 2.2}) {
      const Truncation tr = Truncation::for_mean_photons(std::max(mean, 0.5));
      const auto rho =
          coherent_density(ComplexAmplitude<double>(std::sqrt(mean), 0.3), tr);
      CHECK(std::abs(detector_click_prob_coherent(mean, det) -
                     click_probability(rho, det)) < 1e-10);
    }
  }

  SUBCASE("Poisson pair through splitter and detector") {
    const double m1 = 1.0, m2 = 0.7, theta = 0.6;
    const Truncation tr = Truncation::for_mean_photons(m1 + m2);
    const auto joint = apply_vbs(
        BeamSplitterSetting<double>{theta},
        tensor_product(poisson_state(m1, tr), poisson_state(m2, tr)));
    const auto port1 = partial_trace_second(joint);
    CHECK(std::abs(detector_click_prob_poisson_pair(
                       m1, m2, BeamSplitterSetting<double>{theta}, det) -
                   click_probability(port1, det)) < 1e-10);
  }

  SUBCASE("ideal detector reduces to the bare closed forms") {
    DetectorModel ideal;
    CHECK(detector_click_prob_coherent(1.7, ideal) ==
          doctest::Approx(1.0 - std::exp(-1.7)).epsilon(1e-15));
    CHECK(detector_click_prob_poisson_pair(kMStar, kMStar,
                                           BeamSplitterSetting<double>{M_PI / 4.0},
                                           ideal) ==
          doctest::Approx(1.0 - oracles::kPoissonVacuum45).epsilon(1e-12));
  }

  SUBCASE("weak signal against a strong dark load (rectangular embedding)") {
    DetectorModel noisy;
    noisy.efficiency = 0.7;
    noisy.dark_mean_photons = 1.0;  // thermal mode needs more levels than the signal
    const Truncation tr = Truncation::for_mean_photons(0.5);
    const auto rho = coherent_density(ComplexAmplitude<double>(std::sqrt(0.3), 0.0), tr);
    CHECK(std::abs(detector_click_prob_coherent(0.3, noisy) -
                   click_probability(rho, noisy)) < 1e-10);
  }
}

TEST_CASE("click probability is monotone in efficiency and dark counts") {
  const Truncation tr = Truncation::for_mean_photons(1.9);
  const auto coh = coherent_density(ComplexAmplitude<double>(std::sqrt(1.9), 0.0), tr);
  const auto weak = poisson_state(0.5, Truncation::for_mean_photons(0.5));
  for (const auto* rho : {&coh, &weak}) {
    for (const double dark : {0.0, 0.05, 0.1}) {
      double prev = -1.0;
      for (int k = 0; k <= 4; ++k) {
        DetectorModel det;
        det.efficiency = k / 4.0;
        det.dark_mean_photons = dark;
        const double p = click_probability(*rho, det);
        CHECK(p >= prev - 1e-12);
        prev = p;
      }
    }
  }
  // Monotonicity in the dark count holds while the transmitted signal is
  // weaker than one photon per window (eta * mean < 1 + residual thermal
  // load); the loop stays inside that regime.
  for (const auto* rho : {&coh, &weak}) {
    const double mean = rho == &coh ? 1.9 : 0.5;
    for (const double eta : {0.2, 0.4}) {
      REQUIRE(eta * mean < 1.0);
      double prev = -1.0;
      for (const double dark : {0.0, 0.03, 0.06, 0.12}) {
        DetectorModel det;
        det.efficiency = eta;
        det.dark_mean_photons = dark;
        const double p = click_probability(*rho, det);
        CHECK(p >= prev - 1e-12);
        prev = p;
      }
    }
  }
}

TEST_CASE("a strong transmitted beam can lose clicks to thermal interference") {
  // Above one transmitted photon per window the thermal mode partially
  // cancels the coherent amplitude, so dark counts lower the click rate.
  const Truncation tr = Truncation::for_mean_photons(1.9);
  const auto coh = coherent_density(ComplexAmplitude<double>(std::sqrt(1.9), 0.0), tr);
  DetectorModel quiet, noisy;
  quiet.efficiency = noisy.efficiency = 0.8;  // eta * mean = 1.52 > 1
  quiet.dark_mean_photons = 0.0;
  noisy.dark_mean_photons = 0.1;
  CHECK(click_probability(coh, noisy) < click_probability(coh, quiet));
  CHECK(std::abs(detector_click_prob_coherent(1.9, noisy) -
                 click_probability(coh, noisy)) < 1e-10);
}

TEST_CASE("sweeps estimate the expected curves") {
  TrialPlan plan;
  plan.theta_grid = {M_PI / 4.0};
  plan.trials_per_theta = 100000;
  plan.seed = 2024;
  LaserPairConfig lasers;
  lasers.mean_photons_1 = lasers.mean_photons_2 = kMStar;
  DetectorModel ideal;

  SUBCASE("Poisson source at the balanced splitter") {
    lasers.source = SourceKind::Poisson;
    const auto recs = run_sweep(plan, lasers, ideal, DriftMode::Fast);
    const double expected = 1.0 - oracles::kPoissonVacuum45;
    const double sigma = std::sqrt(expected * (1.0 - expected) / 1e5);
    CHECK(std::abs(recs[0].p_hat - expected) < 3.0 * sigma);
  }

  SUBCASE("fast-drifting coherent source lands on the same value") {
    lasers.source = SourceKind::Coherent;
    const auto recs = run_sweep(plan, lasers, ideal, DriftMode::Fast);
    const double expected = 1.0 - oracles::kPoissonVacuum45;
    const double sigma = std::sqrt(expected * (1.0 - expected) / 1e5);
    CHECK(std::abs(recs[0].p_hat - expected) < 3.0 * sigma);
  }

  SUBCASE("frozen coherent source follows the phase curve") {
    lasers.source = SourceKind::Coherent;
    lasers.chi_0 = 0.0;
    TrialPlan nine = plan;
    nine.theta_grid = nine_point_grid();
    const auto recs = run_sweep(nine, lasers, ideal, DriftMode::Frozen);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const double expected = ideal_coherent_click(kMStar, 0.0, recs[i].theta);
      const double sigma =
          std::sqrt(expected * (1.0 - expected) / 1e5);
      CHECK(std::abs(recs[i].p_hat - expected) <= 3.0 * sigma + 1e-12);
    }
  }

  SUBCASE("records carry consistent bookkeeping") {
    lasers.source = SourceKind::Poisson;
    const auto recs = run_sweep(plan, lasers, ideal, DriftMode::Fast);
    CHECK(recs.size() == 1);
    CHECK(recs[0].trials == 100000);
    CHECK(recs[0].clicks <= recs[0].trials);
    CHECK(recs[0].p_hat ==
          doctest::Approx(static_cast<double>(recs[0].clicks) / 1e5));
    CHECK(recs[0].std_err ==
          doctest::Approx(std::sqrt(recs[0].p_hat * (1 - recs[0].p_hat) / 1e5)));
  }

  SUBCASE("invalid configuration is rejected") {
    lasers.mean_photons_1 = -1.0;
    CHECK_THROWS_AS(run_sweep(plan, lasers, ideal, DriftMode::Fast),
                    std::invalid_argument);
    lasers.mean_photons_1 = 1.0;
    TrialPlan empty;
    CHECK_THROWS_AS(run_sweep(empty, lasers, ideal, DriftMode::Fast),
                    std::invalid_argument);
  }
}

TEST_CASE("fast-drift coherent sweeps are indistinguishable from Poisson sweeps") {
  TrialPlan plan;
  plan.theta_grid = nine_point_grid();
  plan.trials_per_theta = 100000;
  LaserPairConfig lasers;
  lasers.mean_photons_1 = lasers.mean_photons_2 = kMStar;
  DetectorModel ideal;

  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    plan.seed = 3000 + seed;
    lasers.source = SourceKind::Poisson;
    const auto rp = run_sweep(plan, lasers, ideal, DriftMode::Fast);
    plan.seed = 4000 + seed;
    lasers.source = SourceKind::Coherent;
    const auto rc = run_sweep(plan, lasers, ideal, DriftMode::Fast);
    for (std::size_t i = 0; i < rp.size(); ++i) {
      const double n = 1e5;
      const double pooled = (rp[i].p_hat + rc[i].p_hat) / 2.0;
      const double z = (rp[i].p_hat - rc[i].p_hat) /
                       std::sqrt(pooled * (1.0 - pooled) * (2.0 / n));
      if (std::abs(z) > 3.0) ++rejections;
    }
  }
  // 90 two-proportion tests at the 3-sigma level: expect ~0.24 rejections
  CHECK(rejections <= 2);
}

TEST_CASE("clock drift with coarse windows reproduces the phase average") {
  TrialPlan plan;
  plan.theta_grid = nine_point_grid();
  plan.trials_per_theta = 200000;
  plan.seed = 77;
  LaserPairConfig lasers;
  lasers.mean_photons_1 = lasers.mean_photons_2 = kMStar;
  lasers.source = SourceKind::Coherent;
  DetectorModel det;
  det.window = 1e-6;  // thousands of turns per window spacing
  const auto recs = run_sweep(plan, lasers, det, DriftMode::Clock);
  for (const auto& r : recs) {
    const double expected = ideal_poisson_click(kMStar, r.theta);
    CHECK(std::abs(r.p_hat - expected) < 0.01);
  }
}

TEST_CASE("identical seeds reproduce sweeps exactly") {
  TrialPlan plan;
  plan.theta_grid = nine_point_grid();
  plan.trials_per_theta = 20000;
  plan.seed = 555;
  LaserPairConfig lasers;
  lasers.mean_photons_1 = lasers.mean_photons_2 = 1.3;
  lasers.source = SourceKind::Coherent;
  DetectorModel det;
  const auto a = run_sweep(plan, lasers, det, DriftMode::Fast);
  const auto b = run_sweep(plan, lasers, det, DriftMode::Fast);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].clicks == b[i].clicks);
  plan.seed = 556;
  const auto c = run_sweep(plan, lasers, det, DriftMode::Fast);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    any_diff = any_diff || a[i].clicks != c[i].clicks;
  CHECK(any_diff);
}

TEST_CASE("curve classification") {
  SUBCASE("noiseless Poisson curve") {
    const auto recs = synthetic_records(
        [](double t) { return ideal_poisson_click(kMStar, t); });
    const auto v = classify_curve(recs, kMStar);
    CHECK(v.model == ClassifyResult::Model::Poisson);
    CHECK(std::abs(v.m_hat - kMStar) < 1e-4);
  }

  SUBCASE("noiseless coherent curves across the phase grid") {
    for (int k = 0; k < 16; ++k) {
      const double chi = 2.0 * M_PI * k / 16.0;
      const auto recs = synthetic_records(
          [&](double t) { return ideal_coherent_click(kMStar, chi, t); });
      const auto v = classify_curve(recs, kMStar);
      CHECK(v.model == ClassifyResult::Model::Coherent);
      const double folded = chi > M_PI ? 2.0 * M_PI - chi : chi;
      CHECK(std::abs(v.chi_hat - folded) < 1e-3);
    }
  }

  SUBCASE("span and spacing preconditions") {
    const auto narrow = synthetic_records(
        [](double t) { return ideal_poisson_click(kMStar, t); }, 5, 0.0,
        M_PI / 2.0);
    CHECK_THROWS_AS(classify_curve(narrow, kMStar), InsufficientSpanError);
    const auto sparse = synthetic_records(
        [](double t) { return ideal_poisson_click(kMStar, t); }, 3, 0.0,
        2.0 * M_PI);
    CHECK_THROWS_AS(classify_curve(sparse, kMStar), InsufficientSpanError);
    CHECK_NOTHROW(classify_curve(narrow, kMStar, false));
  }

  SUBCASE("noisy restricted window may stay undecided but never flips") {
    // the phase curve at 67.5 deg shadows the Poisson curve on [90, 180] deg
    TrialPlan plan;
    for (int i = 0; i <= 4; ++i)
      plan.theta_grid.push_back((90.0 + 22.5 * i) * M_PI / 180.0);
    plan.trials_per_theta = 20000;
    plan.seed = 9;
    LaserPairConfig lasers;
    lasers.mean_photons_1 = lasers.mean_photons_2 = kMStar;
    lasers.source = SourceKind::Coherent;
    lasers.chi_0 = 67.5 * M_PI / 180.0;
    const auto recs = run_sweep(plan, lasers, DetectorModel{}, DriftMode::Frozen);
    const auto v = classify_curve(recs, kMStar, false);
    CHECK(v.model != ClassifyResult::Model::Poisson);
  }

  SUBCASE("fast-drift coherent data classifies as Poisson") {
    TrialPlan plan;
    plan.theta_grid = nine_point_grid();
    plan.trials_per_theta = 100000;
    plan.seed = 31;
    LaserPairConfig lasers;
    lasers.mean_photons_1 = lasers.mean_photons_2 = kMStar;
    lasers.source = SourceKind::Coherent;
    const auto recs = run_sweep(plan, lasers, DetectorModel{}, DriftMode::Fast);
    CHECK(classify_curve(recs, kMStar).model == ClassifyResult::Model::Poisson);
  }

  SUBCASE("frozen coherent data recovers the locked phase") {
    TrialPlan plan;
    plan.theta_grid = nine_point_grid();
    plan.trials_per_theta = 100000;
    plan.seed = 32;
    LaserPairConfig lasers;
    lasers.mean_photons_1 = lasers.mean_photons_2 = kMStar;
    lasers.source = SourceKind::Coherent;
    lasers.chi_0 = 0.0;
    const auto recs = run_sweep(plan, lasers, DetectorModel{}, DriftMode::Frozen);
    const auto v = classify_curve(recs, kMStar);
    CHECK(v.model == ClassifyResult::Model::Coherent);
    CHECK(std::min(v.chi_hat, 2.0 * M_PI - v.chi_hat) < 5.0 * M_PI / 180.0);
  }
}

TEST_CASE("free evolution of a coherent parameter") {
  const ComplexAmplitude<double> alpha(1.4, 0.8);
  SUBCASE("no time, no change") {
    const auto e = coherent_time_evolution(alpha, 1e9, 0.0);
    CHECK(e.amplitude.magnitude == doctest::Approx(1.4));
    CHECK(e.amplitude.phase == doctest::Approx(0.8));
    CHECK(e.global_phase == doctest::Approx(0.0));
  }
  SUBCASE("full turn wraps the parameter phase") {
    const double omega = 2.0 * M_PI;
    const auto e = coherent_time_evolution(alpha, omega, 1.0);
    CHECK(e.amplitude.magnitude == doctest::Approx(1.4));
    CHECK(std::abs(std::remainder(e.amplitude.phase - 0.8, 2.0 * M_PI)) < 1e-12);
  }
  SUBCASE("common evolution leaves the output statistics alone") {
    const ComplexAmplitude<double> beta(0.9, 2.4);
    const BeamSplitterSetting<double> st{0.61};
    const double before = vacuum_prob_coherent(alpha, beta, st);
    const double omega = 2.9545e15, t = 1.7e-13;
    const double after =
        vacuum_prob_coherent(coherent_time_evolution(alpha, omega, t).amplitude,
                             coherent_time_evolution(beta, omega, t).amplitude, st);
    CHECK(std::abs(before - after) < 1e-12);
  }
  SUBCASE("negative frequency is rejected") {
    CHECK_THROWS_AS(coherent_time_evolution(alpha, -1.0, 0.1),
                    std::invalid_argument);
  }
}
