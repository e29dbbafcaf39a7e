#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "spherecs/specfun.hpp"

namespace spherecs {

// Racah single-sum formula with log-factorial accumulation.
double wigner3j(int l1, int l2, int l3, int k1, int k2, int k3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) return 0.0;
  if (std::abs(k1) > l1 || std::abs(k2) > l2 || std::abs(k3) > l3) return 0.0;
  if (k1 + k2 + k3 != 0) return 0.0;
  if (l3 < std::abs(l1 - l2) || l3 > l1 + l2) return 0.0;
  if (k1 == 0 && k2 == 0 && k3 == 0 && (l1 + l2 + l3) % 2 != 0) return 0.0;

  const double log_triangle = log_factorial(l1 + l2 - l3) + log_factorial(l1 - l2 + l3) +
                              log_factorial(-l1 + l2 + l3) - log_factorial(l1 + l2 + l3 + 1);
  const double log_prefactor =
      0.5 * (log_triangle + log_factorial(l1 + k1) + log_factorial(l1 - k1) +
             log_factorial(l2 + k2) + log_factorial(l2 - k2) + log_factorial(l3 + k3) +
             log_factorial(l3 - k3));

  const int t_min = std::max({0, l2 - l3 - k1, l1 - l3 + k2});
  const int t_max = std::min({l1 + l2 - l3, l1 - k1, l2 + k2});

  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double log_den = log_factorial(t) + log_factorial(l3 - l2 + t + k1) +
                           log_factorial(l3 - l1 + t - k2) + log_factorial(l1 + l2 - l3 - t) +
                           log_factorial(l1 - t - k1) + log_factorial(l2 - t + k2);
    const double term = std::exp(log_prefactor - log_den);
    sum += (t % 2 == 0) ? term : -term;
  }
  const int phase_exp = l1 - l2 - k3;
  return (std::abs(phase_exp) % 2 == 0) ? sum : -sum;
}

}  // namespace spherecs
