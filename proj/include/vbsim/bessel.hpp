#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vbsim/common.hpp"

namespace vbsim {

/// Modified Bessel function of the first kind, order zero, by its power
/// series sum_n (x^2/4)^n / (n!)^2, accumulated in long double and summed
/// until the relative term drops below 1e-16.
template <typename Scalar>
Scalar bessel_i0(Scalar x) {
  if (!(std::abs(x) < Scalar(700)))
    throw std::domain_error("bessel_i0 argument beyond overflow guard (|x| < 700)");
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int n = 1; term >= 1e-16L * sum; ++n) {
    term *= q / (static_cast<long double>(n) * n);
    sum += term;
  }
  return static_cast<Scalar>(sum);
}

/// Residual of three equivalent double-series expressions against their
/// closed form e^{A^2+B^2} I0(2AB):
///
///   sum_n 1/n!  sum_k [C(n,k) A^{n-k} B^k]^2
///   sum_n n!    sum_k [A^{n-k}/(n-k)! * B^k/k!]^2
///   sum_n sum_{k<=floor(n/2)} ((AB)^k/k!)^2 (A^2+B^2)^{n-2k} / (n-2k)!
///
/// Outer sums run to n_terms.  All accumulation is done in long double; the
/// returned value is the largest absolute deviation of the three sums from
/// the closed form.
template <typename Scalar>
Scalar check_bessel_identities(Scalar A, Scalar B, int n_terms) {
  if (!(std::abs(A) <= Scalar(5) && std::abs(B) <= Scalar(5)))
    throw std::invalid_argument("identity check limited to |A|,|B| <= 5");
  if (n_terms < 1 || n_terms > 1000)
    throw std::invalid_argument("n_terms must lie in [1, 1000]");

  const long double a = static_cast<long double>(A);
  const long double b = static_cast<long double>(B);
  const auto fact = factorial_table<long double>(n_terms);

  long double lhs1 = 0.0L, lhs2 = 0.0L, lhs3 = 0.0L;
  for (int n = 0; n < n_terms; ++n) {
    long double inner1 = 0.0L, inner2 = 0.0L;
    for (int k = 0; k <= n; ++k) {
      const long double binom = fact[n] / (fact[k] * fact[n - k]);
      const long double t1 = binom * std::pow(a, n - k) * std::pow(b, k);
      inner1 += t1 * t1;
      const long double t2 =
          std::pow(a, n - k) / fact[n - k] * std::pow(b, k) / fact[k];
      inner2 += t2 * t2;
    }
    lhs1 += inner1 / fact[n];
    lhs2 += fact[n] * inner2;
    // K_n = (n + ((-1)^n - 1)/2)/2, i.e. floor(n/2)
    const int k_cap = n / 2;
    for (int k = 0; k <= k_cap; ++k) {
      const long double r = std::pow(a * b, k) / fact[k];
      lhs3 += r * r * std::pow(a * a + b * b, n - 2 * k) / fact[n - 2 * k];
    }
  }

  const long double rhs =
      std::exp(a * a + b * b) * bessel_i0<long double>(2.0L * a * b);
  const long double res = std::max({std::abs(lhs1 - rhs), std::abs(lhs2 - rhs),
                                    std::abs(lhs3 - rhs)});
  return static_cast<Scalar>(res);
}

}  // namespace vbsim
