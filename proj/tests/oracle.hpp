#pragma once
// Brute-force reference integration, kept independent of the library's
// quadrature and closed forms: fixed-panel 10-point Gauss-Legendre.

#include <array>
#include <cmath>
#include <cstddef>

namespace oracle {

inline constexpr std::array<double, 5> kNodes{0.1488743389816312, 0.4333953941292472,
                                              0.6794095682990244, 0.8650633666889845,
                                              0.9739065285171717};
inline constexpr std::array<double, 5> kWeights{0.2955242247147529, 0.2692667193099963,
                                                0.2190863625159820, 0.1494513491505806,
                                                0.0666713443086881};

template <class F>
double integrate(F&& f, double a, double b, std::size_t panels = 4000) {
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double mid = a + (static_cast<double>(i) + 0.5) * h;
    double s = 0.0;
    for (std::size_t k = 0; k < kNodes.size(); ++k) {
      const double d = 0.5 * h * kNodes[k];
      s += kWeights[k] * (f(mid - d) + f(mid + d));
    }
    // Kahan
    const double y = 0.5 * h * s - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return total;
}

/// Integral over a list of breakpoints so kinks (|f| at roots) fall on panel edges.
template <class F, class Breaks>
double integrate_broken(F&& f, const Breaks& breaks, std::size_t panels_each = 2000) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += integrate(f, breaks[i], breaks[i + 1], panels_each);
  return total;
}

}  // namespace oracle
