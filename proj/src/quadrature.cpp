#include "tauber/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace tauber {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol) {
  if (!(b > a)) return {};
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err);
  return {v, err};
}

QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel, double rel_tol) {
  QuadratureResult total;
  if (!(b > a)) return total;
  const auto n = static_cast<long long>(std::max(1.0, std::ceil((b - a) / panel)));
  const double width = (b - a) / static_cast<double>(n);
  // Neumaier summation: oscillatory panels cancel heavily.
  double sum = 0.0, comp = 0.0;
  for (long long i = 0; i < n; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = (i + 1 == n) ? b : a + width * static_cast<double>(i + 1);
    const QuadratureResult r = integrate_adaptive(f, lo, hi, rel_tol);
    const double t = sum + r.value;
    comp += std::abs(sum) >= std::abs(r.value) ? (sum - t) + r.value : (r.value - t) + sum;
    sum = t;
    total.error += r.error;
  }
  total.value = sum + comp;
  return total;
}

}  // namespace tauber
