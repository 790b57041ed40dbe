#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "isop/error.hpp"

namespace isop {

struct ScalarMaximum {
  double argmax = 0;
  double value = 0;
  int evaluations = 0;
};

/// Maximises a unimodal f on (lower, inf): geometric bracket expansion away
/// from `lower`, then golden-section search on the bracket. No derivatives.
inline ScalarMaximum maximize_unimodal(const std::function<double(double)>& f, double lower, double initial_step = 1.0,
                                       double rel_tol = 1e-12) {
  int evals = 0;
  auto eval = [&](double x) {
    ++evals;
    return f(x);
  };

  // f tends to its infimum at `lower`, so (lower, c) brackets the peak as
  // soon as f(b) >= f(c) for b = lower + step, c = lower + 2 step.
  double step = initial_step;
  double a = lower;
  double b = lower + step;
  double fb = eval(b);
  double c = lower + 2 * step;
  double fc = eval(c);
  while (fc > fb) {
    a = b;
    b = c;
    fb = fc;
    step *= 2;
    c = lower + 2 * step;
    if (!(c < std::numeric_limits<double>::max() / 4)) throw DomainError("maximum not bracketed");
    fc = eval(c);
  }
  if (!std::isfinite(fb)) throw DomainError("objective is not finite on the search interval");

  const double inv_phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int iter = 0; iter < 500 && (c - a) > rel_tol * (std::fabs(x1) + std::fabs(x2)); ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (c - a);
      f2 = eval(x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - inv_phi * (c - a);
      f1 = eval(x1);
    }
  }
  return f1 >= f2 ? ScalarMaximum{x1, f1, evals} : ScalarMaximum{x2, f2, evals};
}

}  // namespace isop
