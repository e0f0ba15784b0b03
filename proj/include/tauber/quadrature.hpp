#pragma once

#include <functional>

namespace tauber {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15/31) on a finite interval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-13);

/// Splits [a, b] into panels no wider than `panel` and integrates each
/// adaptively; errors are summed.
QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel, double rel_tol = 1e-13);

}  // namespace tauber
