#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace vbsim {

/// Speed of light in vacuum [m/s], exact by definition.
inline constexpr double kSpeedOfLight = 299792458.0;

/// A requested state carries more probability mass beyond the Fock cutoff
/// than the configured tail tolerance allows.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mode dimensions of two operands do not agree.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A requested object would exceed the configured memory bound.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sweep does not cover enough of the beam-splitter angle range for a
/// classification verdict.
struct InsufficientSpanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed run configuration (file or flags).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output file could not be opened or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reduce an angle into [0, 2*pi).
template <typename Scalar>
Scalar normalize_angle(Scalar phi) {
  const Scalar two_pi = Scalar(2) * static_cast<Scalar>(M_PI);
  Scalar out = std::fmod(phi, two_pi);
  if (out < Scalar(0)) out += two_pi;
  if (out >= two_pi) out = Scalar(0);  // rounding at the seam
  return out;
}

/// Probability mass of a Poisson(mean) distribution beyond n_max.
template <typename Scalar>
Scalar poisson_tail(Scalar mean, int n_max) {
  if (mean <= Scalar(0)) return Scalar(0);
  Scalar term = std::exp(-mean);
  Scalar cum = term;
  for (int k = 1; k <= n_max; ++k) {
    term *= mean / Scalar(k);
    cum += term;
  }
  Scalar tail = Scalar(1) - cum;
  return tail > Scalar(0) ? tail : Scalar(0);
}

/// Probability mass of a Bose-Einstein (thermal) distribution with mean
/// occupation nbar beyond n_max: (nbar/(1+nbar))^(n_max+1).
template <typename Scalar>
Scalar thermal_tail(Scalar nbar, int n_max) {
  if (nbar <= Scalar(0)) return Scalar(0);
  return std::pow(nbar / (Scalar(1) + nbar), Scalar(n_max + 1));
}

/// fact[k] = k! for k = 0..n, by running product.  n must be <= 170 so the
/// values stay representable in double.
template <typename Scalar>
std::vector<Scalar> factorial_table(int n) {
  std::vector<Scalar> fact(static_cast<std::size_t>(n) + 1);
  fact[0] = Scalar(1);
  for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * Scalar(k);
  return fact;
}

}  // namespace vbsim
