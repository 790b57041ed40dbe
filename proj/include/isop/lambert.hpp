#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <string>

#include "isop/error.hpp"

namespace isop {

namespace detail {

inline constexpr long double kInvE = 0.367879441171442321595523770161460867445811131L;
inline constexpr long double kE = 2.718281828459045235360287471352662497757247094L;

// Coefficients of W_{-1} = -1 - p - p^2/3 - 11/72 p^3 - ... at the branch
// point, with p = sqrt(2 (1 + e x)).
template <std::floating_point T>
T branch_series(T p) {
  constexpr long double c[] = {-1.0L,
                               -1.0L,
                               -1.0L / 3.0L,
                               -11.0L / 72.0L,
                               -43.0L / 540.0L,
                               -769.0L / 17280.0L,
                               -221.0L / 8505.0L,
                               -680863.0L / 43545600.0L,
                               -1963.0L / 204120.0L,
                               -226287557.0L / 37623398400.0L};
  T sum = 0;
  for (int k = 9; k >= 0; --k) sum = sum * p + static_cast<T>(c[k]);
  return sum;
}

}  // namespace detail

/// Lower real branch W_{-1}: [-1/e, 0) -> (-inf, -1], w e^w = x.
///
/// Near the branch point the series in p = sqrt(2(1 + e x)) is used
/// directly. Elsewhere Newton's method runs on the log form
/// w + log(-w) = log(-x), which is increasing on (-inf, -1]; iterates are
/// kept inside a bracket [2 log(-x) - 1, -1] and fall back to bisection
/// whenever a step would leave it.
template <std::floating_point T = double>
T lambert_w_minus1(T x) {
  const T inv_e = static_cast<T>(detail::kInvE);
  if (!(x < 0)) throw DomainError("lambert_w_minus1 requires -1/e <= x < 0 (got " + std::to_string(static_cast<double>(x)) + ")");
  const T gap = x + inv_e;  // exact by Sterbenz near the branch point
  if (gap < 0) {
    if (-gap <= 8 * std::numeric_limits<T>::epsilon() * inv_e) return T(-1);
    throw DomainError("lambert_w_minus1 requires -1/e <= x < 0 (got " + std::to_string(static_cast<double>(x)) + ")");
  }
  const T p = std::sqrt(2 * static_cast<T>(detail::kE) * gap);
  if (p < T(0.01)) return detail::branch_series(p);

  const T log_mx = std::log(-x);
  T lo = 2 * log_mx - 1;
  T hi = T(-1);
  T w;
  if (p < T(1)) {
    w = detail::branch_series(p);
  } else {
    const T l2 = std::log(-log_mx);
    w = log_mx - l2 + l2 / log_mx;
  }
  if (!(w > lo && w < hi)) w = (lo + hi) / 2;

  const T tol = 2 * std::numeric_limits<T>::epsilon();
  for (int iter = 0; iter < 200; ++iter) {
    const T f = w + std::log(-w) - log_mx;
    if (f == 0) break;
    if (f < 0) {
      lo = w;
    } else {
      hi = w;
    }
    const T slope = 1 + 1 / w;
    T next = slope > 0 ? w - f / slope : (lo + hi) / 2;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    const T step = std::fabs(next - w);
    w = next;
    if (step <= tol * std::fabs(w) || hi - lo <= tol * std::fabs(w)) break;
  }
  return w;
}

/// |w e^w - x| / |x| evaluated in extended precision.
template <std::floating_point T>
long double lambert_relative_residual(T w, T x) {
  const long double lw = w;
  const long double lx = x;
  return std::fabs(lw * std::exp(lw) - lx) / std::fabs(lx);
}

}  // namespace isop
