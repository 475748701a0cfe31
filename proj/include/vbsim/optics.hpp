#pragma once

#include <utility>
#include <vector>

#include "vbsim/bessel.hpp"
#include "vbsim/states.hpp"

namespace vbsim {

/// Beam-splitter angle theta [rad]; the transmittivity is cos^2(theta).
template <typename Scalar>
struct BeamSplitterSetting {
  Scalar theta{0};

  Scalar transmittivity() const {
    const Scalar c = std::cos(theta);
    return c * c;
  }
  static BeamSplitterSetting from_degrees(Scalar deg) {
    return BeamSplitterSetting{deg * static_cast<Scalar>(M_PI) / Scalar(180)};
  }
};

namespace detail {

/// Flat indices of each total-photon-number subspace of a dim_a x dim_b
/// two-mode space (first mode major).  blocks[N] lists flat(n, N-n) in
/// ascending n.
inline std::vector<std::vector<int>> number_blocks(int dim_a, int dim_b) {
  std::vector<std::vector<int>> blocks(dim_a + dim_b - 1);
  for (int N = 0; N < dim_a + dim_b - 1; ++N) {
    const int n_lo = std::max(0, N - dim_b + 1);
    const int n_hi = std::min(N, dim_a - 1);
    blocks[N].reserve(n_hi - n_lo + 1);
    for (int n = n_lo; n <= n_hi; ++n) blocks[N].push_back(n * dim_b + (N - n));
  }
  return blocks;
}

/// exp(theta (ad b - a bd)) restricted to the total-photon-number-N subspace,
/// in the same member order as number_blocks.  The restricted generator is a
/// real skew-symmetric tridiagonal matrix, exponentiated through the
/// eigendecomposition of its Hermitian counterpart so each block is unitary
/// to machine precision.
template <typename Scalar>
ComplexMatrix<Scalar> vbs_block(Scalar theta, int N, int dim_a, int dim_b) {
  const int n_lo = std::max(0, N - dim_b + 1);
  const int n_hi = std::min(N, dim_a - 1);
  const int size = n_hi - n_lo + 1;
  const std::complex<Scalar> i_unit(Scalar(0), Scalar(1));
  ComplexMatrix<Scalar> ham = ComplexMatrix<Scalar>::Zero(size, size);
  for (int j = 0; j < size; ++j) {
    const int n = n_lo + j;
    const int m = N - n;
    // <n+1, m-1| (ad b - a bd) |n, m> = sqrt((n+1) m)
    if (j + 1 < size)
      ham(j + 1, j) = -i_unit * theta * std::sqrt(Scalar((n + 1) * m));
    if (j > 0) ham(j - 1, j) = i_unit * theta * std::sqrt(Scalar(n * (m + 1)));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(ham);
  ComplexVector<Scalar> phases(size);
  for (int k = 0; k < size; ++k)
    phases[k] = std::exp(i_unit * solver.eigenvalues()[k]);
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace detail

/// Dense two-mode beam-splitter unitary, block-diagonal in total photon
/// number.  Entries coupling different totals are exactly zero; block_index
/// maps each total N to the flat indices of its members.
template <typename Scalar>
struct TwoModeUnitary {
  ComplexMatrix<Scalar> entries;
  int dim_a = 0;
  int dim_b = 0;
  std::vector<std::vector<int>> block_index;
};

template <typename Scalar>
TwoModeUnitary<Scalar> build_vbs(BeamSplitterSetting<Scalar> setting, int dim_a,
                                 int dim_b) {
  if (dim_a < 2 || dim_b < 2)
    throw DimensionError("beam-splitter unitary needs at least 2 levels per mode");
  TwoModeUnitary<Scalar> u;
  u.dim_a = dim_a;
  u.dim_b = dim_b;
  u.block_index = detail::number_blocks(dim_a, dim_b);
  u.entries = ComplexMatrix<Scalar>::Zero(dim_a * dim_b, dim_a * dim_b);
  for (int N = 0; N < static_cast<int>(u.block_index.size()); ++N) {
    const auto& members = u.block_index[N];
    const ComplexMatrix<Scalar> block =
        detail::vbs_block(setting.theta, N, dim_a, dim_b);
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = 0; j < members.size(); ++j)
        u.entries(members[i], members[j]) = block(i, j);
  }
  return u;
}

/// U rho U^dag for the beam-splitter unitary, computed block pair by block
/// pair so the full unitary is never materialized.
template <typename Scalar>
TwoModeState<Scalar> apply_vbs(BeamSplitterSetting<Scalar> setting,
                               const TwoModeState<Scalar>& rho) {
  if (rho.dim_a * rho.dim_b != static_cast<int>(rho.entries.rows()))
    throw DimensionError("two-mode state entries do not match its dimensions");
  const auto blocks = detail::number_blocks(rho.dim_a, rho.dim_b);
  std::vector<ComplexMatrix<Scalar>> unitaries(blocks.size());
  for (int N = 0; N < static_cast<int>(blocks.size()); ++N)
    unitaries[N] = detail::vbs_block(setting.theta, N, rho.dim_a, rho.dim_b);

  TwoModeState<Scalar> out;
  out.dim_a = rho.dim_a;
  out.dim_b = rho.dim_b;
  out.trunc = rho.trunc;
  out.entries =
      ComplexMatrix<Scalar>::Zero(rho.entries.rows(), rho.entries.cols());
  ComplexMatrix<Scalar> sub;
  for (std::size_t I = 0; I < blocks.size(); ++I) {
    for (std::size_t J = 0; J < blocks.size(); ++J) {
      const auto& rows = blocks[I];
      const auto& cols = blocks[J];
      sub.resize(rows.size(), cols.size());
      bool nonzero = false;
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
          sub(i, j) = rho.entries(rows[i], cols[j]);
          nonzero = nonzero || sub(i, j) != std::complex<Scalar>{};
        }
      if (!nonzero) continue;
      sub = unitaries[I] * sub * unitaries[J].adjoint();
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
          out.entries(rows[i], cols[j]) = sub(i, j);
    }
  }
  return out;
}

/// Coherent parameters of the two output beams: a' = a c + b s,
/// b' = -a s + b c.
template <typename Scalar>
std::pair<ComplexAmplitude<Scalar>, ComplexAmplitude<Scalar>>
coherent_output_params(const ComplexAmplitude<Scalar>& alpha,
                       const ComplexAmplitude<Scalar>& beta,
                       BeamSplitterSetting<Scalar> setting) {
  const Scalar c = std::cos(setting.theta);
  const Scalar s = std::sin(setting.theta);
  const std::complex<Scalar> a = alpha.value();
  const std::complex<Scalar> b = beta.value();
  return {ComplexAmplitude<Scalar>::from_value(a * c + b * s),
          ComplexAmplitude<Scalar>::from_value(-a * s + b * c)};
}

/// Vacuum probability of output port 1 for dual coherent inputs:
/// exp(-|a c + b s|^2).
template <typename Scalar>
Scalar vacuum_prob_coherent(const ComplexAmplitude<Scalar>& alpha,
                            const ComplexAmplitude<Scalar>& beta,
                            BeamSplitterSetting<Scalar> setting) {
  const Scalar c = std::cos(setting.theta);
  const Scalar s = std::sin(setting.theta);
  const std::complex<Scalar> ap = alpha.value() * c + beta.value() * s;
  return std::exp(-std::norm(ap));
}

/// Vacuum probability of output port 1 for dual Poisson inputs:
/// exp(-|a c|^2 - |b s|^2) I0(|a||b| sin(2 theta)).
template <typename Scalar>
Scalar vacuum_prob_poisson(Scalar mag_alpha, Scalar mag_beta,
                           BeamSplitterSetting<Scalar> setting) {
  if (!(mag_alpha >= Scalar(0) && mag_beta >= Scalar(0)))
    throw std::invalid_argument("magnitudes must be >= 0");
  const Scalar c = std::cos(setting.theta);
  const Scalar s = std::sin(setting.theta);
  const Scalar exponent =
      -mag_alpha * mag_alpha * c * c - mag_beta * mag_beta * s * s;
  return std::exp(exponent) *
         bessel_i0(mag_alpha * mag_beta * std::sin(Scalar(2) * setting.theta));
}

/// Vacuum probability for equal-amplitude coherent inputs with relative
/// phase chi: exp(-mean (1 + sin(2 theta) cos(chi))).
template <typename Scalar>
Scalar vacuum_prob_coherent_phase(Scalar mean_photons, Scalar chi,
                                  BeamSplitterSetting<Scalar> setting) {
  return std::exp(-mean_photons *
                  (Scalar(1) + std::sin(Scalar(2) * setting.theta) * std::cos(chi)));
}

/// Output of the beam splitter on a product of two Poisson states, evaluated
/// term by term from the per-total-photon-number expansion of the input Fock
/// components (quadruple sum over the binomially scattered kets and bras).
/// Powers of cos/sin are regrouped into the inner terms so that theta = 0 and
/// theta = 90 deg stay finite; the regrouping is an exact per-term identity.
template <typename Scalar>
TwoModeState<Scalar> poisson_output_direct(Scalar mag_alpha, Scalar mag_beta,
                                           BeamSplitterSetting<Scalar> setting,
                                           const Truncation& trunc) {
  const Scalar lam_a = mag_alpha * mag_alpha;
  const Scalar lam_b = mag_beta * mag_beta;
  trunc.require_admits(lam_a);
  trunc.require_admits(lam_b);
  const int d = trunc.dim();
  if (d * d > kMaxTwoModeFlatDim)
    throw ResourceError("two-mode dimension exceeds bound");
  const Scalar c = std::cos(setting.theta);
  const Scalar s = std::sin(setting.theta);
  const auto fact = factorial_table<Scalar>(2 * d);

  // Poisson weights per mode.
  std::vector<Scalar> wa(d), wb(d);
  wa[0] = std::exp(-lam_a);
  wb[0] = std::exp(-lam_b);
  for (int n = 1; n < d; ++n) {
    wa[n] = wa[n - 1] * lam_a / Scalar(n);
    wb[n] = wb[n - 1] * lam_b / Scalar(n);
  }

  TwoModeState<Scalar> out;
  out.dim_a = out.dim_b = d;
  out.trunc = trunc;
  out.entries = ComplexMatrix<Scalar>::Zero(d * d, d * d);

  std::vector<Scalar> f;
  std::vector<Scalar> cpow(d + 1), spow(d + 1);
  cpow[0] = spow[0] = Scalar(1);
  for (int k = 1; k <= d; ++k) {
    cpow[k] = cpow[k - 1] * c;
    spow[k] = spow[k - 1] * s;
  }

  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const Scalar weight = wa[n] * wb[m];
      if (weight < Scalar(1e-300)) continue;
      const int N = n + m;
      // f[k] = sqrt((N-k)! k! / (n! m!)) *
      //        sum_{q+r=k} C(n,q) C(m,r) c^{n-q} (-s)^q s^{m-r} c^r
      f.assign(N + 1, Scalar(0));
      for (int q = 0; q <= n; ++q) {
        const Scalar fq = fact[n] / (fact[q] * fact[n - q]) * cpow[n - q] *
                          (q % 2 == 0 ? spow[q] : -spow[q]);
        for (int r = 0; r <= m; ++r) {
          f[q + r] += fq * fact[m] / (fact[r] * fact[m - r]) * spow[m - r] *
                      cpow[r];
        }
      }
      for (int k = 0; k <= N; ++k)
        f[k] *= std::sqrt(fact[N - k] * fact[k] / (fact[n] * fact[m]));
      // scatter the rank-one block contribution at [(N-k, k), (N-l, l)]
      for (int k = std::max(0, N - d + 1); k <= std::min(N, d - 1); ++k) {
        if (f[k] == Scalar(0)) continue;
        const int row = (N - k) * d + k;
        for (int l = std::max(0, N - d + 1); l <= std::min(N, d - 1); ++l)
          out.entries(row, (N - l) * d + l) += weight * f[k] * f[l];
      }
    }
  }
  return out;
}

/// Average of the coherent vacuum probability over the relative phase,
/// computed with a composite trapezoid rule on the periodic integrand.
/// Collapses onto the dual-Poisson closed form.
template <typename Scalar>
Scalar phase_averaged_vacuum_prob(Scalar mag_alpha, Scalar mag_beta,
                                  BeamSplitterSetting<Scalar> setting,
                                  int n_points = 1024) {
  if (n_points < 2) throw std::invalid_argument("need at least 2 points");
  const ComplexAmplitude<Scalar> alpha(mag_alpha, Scalar(0));
  Scalar acc = 0;
  for (int k = 0; k < n_points; ++k) {
    const Scalar chi =
        Scalar(2) * static_cast<Scalar>(M_PI) * Scalar(k) / Scalar(n_points);
    acc += vacuum_prob_coherent(alpha, ComplexAmplitude<Scalar>(mag_beta, chi),
                                setting);
  }
  return acc / Scalar(n_points);
}

/// Vacuum probability at one output of a beam splitter fed with the joint
/// state made by 50:50-splitting a Poisson state against vacuum:
/// exp(-(mean/2) (1 - sin(2 theta))).  Identical to the value produced by a
/// coherent input pair (a', -a') with |a'|^2 = mean/2, which is what makes
/// the split-beam preparation unable to distinguish the two sources.
template <typename Scalar>
Scalar split_poisson_vbs_vacuum_prob(Scalar mean_photons,
                                     BeamSplitterSetting<Scalar> setting) {
  if (!(mean_photons >= Scalar(0)))
    throw std::invalid_argument("mean photon number must be >= 0");
  return std::exp(-(mean_photons / Scalar(2)) *
                  (Scalar(1) - std::sin(Scalar(2) * setting.theta)));
}

template <typename Scalar>
struct SplitReducedResult {
  SingleModeState<Scalar> reduced;  ///< port-1 state after the 50:50 split
  Scalar poisson_residual;   ///< max |reduced - Poisson(mean/2)| entrywise
  Scalar joint_max_offdiagonal;  ///< largest off-diagonal of the joint state
};

/// 50:50-split a Poisson state against vacuum and reduce to one beam.  The
/// reduced state is again Poisson with half the mean, while the joint state
/// is not diagonal, so the pair is not a product of Poisson states.
template <typename Scalar>
SplitReducedResult<Scalar> reduced_state_after_5050(Scalar mean_photons,
                                                    const Truncation& trunc) {
  const SingleModeState<Scalar> in = poisson_state(mean_photons, trunc);
  const SingleModeState<Scalar> vac = poisson_state(Scalar(0), trunc);
  const TwoModeState<Scalar> joint = apply_vbs(
      BeamSplitterSetting<Scalar>{static_cast<Scalar>(M_PI) / Scalar(4)},
      tensor_product(in, vac));
  SplitReducedResult<Scalar> result;
  result.reduced = partial_trace_second(joint);
  const SingleModeState<Scalar> expected =
      poisson_state(mean_photons / Scalar(2), trunc);
  result.poisson_residual =
      (result.reduced.entries - expected.entries).cwiseAbs().maxCoeff();
  Scalar off = 0;
  for (int i = 0; i < joint.flat_dim(); ++i)
    for (int j = 0; j < joint.flat_dim(); ++j)
      if (i != j) off = std::max(off, std::abs(joint.entries(i, j)));
  result.joint_max_offdiagonal = off;
  return result;
}

using BeamSplitterSettingXd = BeamSplitterSetting<double>;
using TwoModeUnitaryXd = TwoModeUnitary<double>;

}  // namespace vbsim
