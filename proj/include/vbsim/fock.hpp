#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <sstream>

#include "vbsim/common.hpp"

namespace vbsim {

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Largest flattened two-mode dimension (dim_a * dim_b) we are willing to
/// allocate; a dense matrix of that size is ~64 MiB of complex doubles.
inline constexpr int kMaxTwoModeFlatDim = 2048;

/// Fock-space cutoff: occupation numbers 0..n_max are kept per mode, and any
/// state built under this cutoff must leave less than tail_tol probability
/// mass above it.
struct Truncation {
  int n_max = 1;
  double tail_tol = 1e-14;

  int dim() const { return n_max + 1; }

  /// Smallest cutoff admitting a Poisson/coherent occupation distribution of
  /// the given mean under tail_tol.
  static Truncation for_mean_photons(double mean, double tail_tol = 1e-14) {
    check_tol(tail_tol);
    int n = 1;
    while (poisson_tail(mean, n) >= tail_tol) {
      if (++n > 4096)
        throw TruncationError("no admissible cutoff below 4096 levels");
    }
    return Truncation{n, tail_tol};
  }

  /// Smallest cutoff admitting a thermal occupation distribution of mean nbar.
  static Truncation for_thermal(double nbar, double tail_tol = 1e-14) {
    check_tol(tail_tol);
    int n = 1;
    while (thermal_tail(nbar, n) >= tail_tol) {
      if (++n > 4096)
        throw TruncationError("no admissible cutoff below 4096 levels");
    }
    return Truncation{n, tail_tol};
  }

  void require_admits(double mean_photons) const {
    const double tail = poisson_tail(mean_photons, n_max);
    if (!(tail < tail_tol)) {
      std::ostringstream os;
      os << "truncation too small: mean " << mean_photons << " leaves tail "
         << tail << " beyond n_max " << n_max << " (tol " << tail_tol << ")";
      throw TruncationError(os.str());
    }
  }

  void require_admits_thermal(double nbar) const {
    const double tail = thermal_tail(nbar, n_max);
    if (!(tail < tail_tol)) {
      std::ostringstream os;
      os << "truncation too small: thermal mean " << nbar << " leaves tail "
         << tail << " beyond n_max " << n_max << " (tol " << tail_tol << ")";
      throw TruncationError(os.str());
    }
  }

 private:
  static void check_tol(double tol) {
    if (!(tol > 0.0 && tol < 1.0))
      throw std::invalid_argument("tail_tol must lie in (0, 1)");
  }
};

/// Density matrix of one mode in the Fock basis {|0>, ..., |n_max>}.
template <typename Scalar>
struct SingleModeState {
  ComplexMatrix<Scalar> entries;
  Truncation trunc;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Density matrix of two modes in the basis |n> (x) |m>, flattened
/// lexicographically with the first mode major: flat(n, m) = n*dim_b + m.
template <typename Scalar>
struct TwoModeState {
  ComplexMatrix<Scalar> entries;
  int dim_a = 0;
  int dim_b = 0;
  Truncation trunc;

  int flat(int n, int m) const { return n * dim_b + m; }
  int flat_dim() const { return dim_a * dim_b; }
};

template <typename Scalar>
struct StateDiagnostics {
  Scalar trace_deficit;        ///< 1 - Re tr(rho)
  Scalar hermiticity_residual; ///< max_ij |rho - rho^dag|
  Scalar min_eigenvalue;       ///< smallest eigenvalue of the Hermitian part
};

template <typename Scalar>
StateDiagnostics<Scalar> diagnostics(const ComplexMatrix<Scalar>& rho) {
  StateDiagnostics<Scalar> d;
  d.trace_deficit = Scalar(1) - rho.trace().real();
  d.hermiticity_residual =
      (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  ComplexMatrix<Scalar> herm = (rho + rho.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(
      herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

template <typename Scalar>
StateDiagnostics<Scalar> diagnostics(const SingleModeState<Scalar>& s) {
  return diagnostics<Scalar>(s.entries);
}

template <typename Scalar>
StateDiagnostics<Scalar> diagnostics(const TwoModeState<Scalar>& s) {
  return diagnostics<Scalar>(s.entries);
}

/// Throw if the state violates its declared invariants: Hermitian within
/// 1e-12, trace within tail_tol of 1, smallest eigenvalue >= -1e-10.
template <typename State>
void validate(const State& s) {
  const auto d = diagnostics(s);
  if (!(d.hermiticity_residual <= 1e-12))
    throw std::runtime_error("state is not Hermitian within 1e-12");
  if (!(std::abs(d.trace_deficit) <= s.trunc.tail_tol))
    throw std::runtime_error("state trace deviates from 1 beyond tail_tol");
  if (!(d.min_eigenvalue >= -1e-10))
    throw std::runtime_error("state has eigenvalue below -1e-10");
}

template <typename Scalar>
TwoModeState<Scalar> tensor_product(const SingleModeState<Scalar>& a,
                                    const SingleModeState<Scalar>& b) {
  if (a.trunc.tail_tol != b.trunc.tail_tol)
    throw DimensionError("tensor_product operands must share tail_tol");
  const int da = a.dim();
  const int db = b.dim();
  if (da * db > kMaxTwoModeFlatDim) {
    std::ostringstream os;
    os << "two-mode dimension " << da << "*" << db << " exceeds bound "
       << kMaxTwoModeFlatDim;
    throw ResourceError(os.str());
  }
  TwoModeState<Scalar> out;
  out.dim_a = da;
  out.dim_b = db;
  out.trunc = Truncation{std::max(a.trunc.n_max, b.trunc.n_max),
                         a.trunc.tail_tol};
  out.entries.resize(da * db, da * db);
  for (int n = 0; n < da; ++n)
    for (int np = 0; np < da; ++np)
      out.entries.block(n * db, np * db, db, db) = a.entries(n, np) * b.entries;
  return out;
}

/// Reduce to the first mode: out[n, n'] = sum_k rho[(n,k), (n',k)].
template <typename Scalar>
SingleModeState<Scalar> partial_trace_second(const TwoModeState<Scalar>& rho) {
  SingleModeState<Scalar> out;
  out.trunc = Truncation{rho.dim_a - 1, rho.trunc.tail_tol};
  out.entries = ComplexMatrix<Scalar>::Zero(rho.dim_a, rho.dim_a);
  for (int n = 0; n < rho.dim_a; ++n)
    for (int np = 0; np < rho.dim_a; ++np) {
      std::complex<Scalar> acc{};
      for (int k = 0; k < rho.dim_b; ++k)
        acc += rho.entries(rho.flat(n, k), rho.flat(np, k));
      out.entries(n, np) = acc;
    }
  return out;
}

/// <0|rho|0>.  The element must be real within 1e-12.
template <typename Scalar>
Scalar vacuum_probability(const SingleModeState<Scalar>& rho) {
  const std::complex<Scalar> p = rho.entries(0, 0);
  if (!(std::abs(p.imag()) <= Scalar(1e-12)))
    throw std::runtime_error("vacuum element has non-negligible imaginary part");
  return p.real();
}

using SingleModeStateXd = SingleModeState<double>;
using TwoModeStateXd = TwoModeState<double>;

}  // namespace vbsim
