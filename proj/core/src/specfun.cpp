#include "spherecs/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "spherecs/error.hpp"

namespace spherecs {
namespace {

constexpr int kLogFactorialTable = 512;

const std::array<double, kLogFactorialTable>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTable> t{};
    t[0] = 0.0;
    for (int i = 1; i < kLogFactorialTable; ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return table;
}

// x^e for a small non-negative integer e; 0^0 == 1.
double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void require_unit_interval(double x, const char* fn) {
  if (!(std::abs(x) <= 1.0)) throw DomainError(std::string(fn) + ": |x| must be <= 1");
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  if (n < kLogFactorialTable) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

bool BasisIndex::valid() const noexcept {
  return l >= 0 && std::abs(k) <= l && std::abs(n) <= l;
}

JacobiParams JacobiParams::from(const BasisIndex& idx) {
  if (!idx.valid()) throw DomainError("JacobiParams: invalid basis index");
  JacobiParams p;
  p.xi = std::abs(idx.k - idx.n);
  p.lambda = std::abs(idx.k + idx.n);
  // xi + lambda = 2 max(|k|, |n|), always even.
  p.alpha = idx.l - (p.xi + p.lambda) / 2;
  const double log_gamma = log_factorial(p.alpha) + log_factorial(p.alpha + p.xi + p.lambda) -
                           log_factorial(p.alpha + p.xi) - log_factorial(p.alpha + p.lambda);
  p.gamma = std::exp(log_gamma);
  p.omega = (idx.n >= idx.k || (idx.n - idx.k) % 2 == 0) ? 1 : -1;
  return p;
}

double assoc_legendre_normalized(int l, int k, double x) {
  if (l < 0 || k < 0 || k > l) throw DomainError("assoc_legendre: need 0 <= k <= l");
  require_unit_interval(x, "assoc_legendre");

  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  // Sectoral seed: Pbar_k^k = (-1)^k sqrt((2k-1)!!/(2k)!!) s^k.
  double pkk = 1.0;
  for (int i = 1; i <= k; ++i) {
    pkk *= -std::sqrt((2.0 * i - 1.0) / (2.0 * i)) * s;
  }
  if (l == k) return pkk;

  double prev = pkk;
  double cur = x * std::sqrt(2.0 * k + 1.0) * pkk;
  for (int j = k + 2; j <= l; ++j) {
    const double next =
        ((2.0 * j - 1.0) * x * cur -
         std::sqrt((j - 1.0 - k) * (j - 1.0 + k)) * prev) /
        std::sqrt((static_cast<double>(j) - k) * (static_cast<double>(j) + k));
    prev = cur;
    cur = next;
  }
  return cur;
}

double assoc_legendre(int l, int k, double x) {
  const double pbar = assoc_legendre_normalized(l, k, x);
  if (pbar == 0.0) return 0.0;
  return pbar * std::exp(0.5 * (log_factorial(l + k) - log_factorial(l - k)));
}

double jacobi(int alpha, int xi, int lambda, double x) {
  if (alpha < 0 || xi < 0 || lambda < 0) throw DomainError("jacobi: negative degree or order");
  require_unit_interval(x, "jacobi");
  if (alpha == 0) return 1.0;

  const double a = xi;
  const double b = lambda;
  double prev = 1.0;
  double cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
  for (int n = 2; n <= alpha; ++n) {
    const double s = 2.0 * n + a + b;
    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    const double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double wigner_d(const BasisIndex& idx, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("wigner_d: theta must lie in [0, pi]");
  }
  const JacobiParams p = JacobiParams::from(idx);
  // Closed forms at the poles avoid 0^0 and a gamma that is only 1 up to rounding.
  if (theta == 0.0) return idx.k == idx.n ? 1.0 : 0.0;
  if (theta == std::numbers::pi) {
    if (idx.k != -idx.n) return 0.0;
    return ((idx.l + idx.n) % 2 == 0) ? 1.0 : -1.0;
  }

  const double half_sin = std::sin(theta / 2.0);
  const double half_cos = std::cos(theta / 2.0);
  const double x = std::cos(theta);
  const double prefactor = ipow(half_sin, p.xi) * ipow(half_cos, p.lambda);
  if (prefactor == 0.0) return 0.0;
  return p.omega * std::sqrt(p.gamma) * prefactor * jacobi(p.alpha, p.xi, p.lambda, x);
}

std::complex<double> spherical_harmonic(int l, int k, double theta, double phi) {
  if (l < 0 || std::abs(k) > l) throw DomainError("spherical_harmonic: need |k| <= l");
  if (k < 0) {
    const auto y = std::conj(spherical_harmonic(l, -k, theta, phi));
    return (k % 2 == 0) ? y : -y;
  }
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi));
  const double value = norm * assoc_legendre_normalized(l, k, std::cos(theta));
  return std::polar(value, k * phi);
}

std::complex<double> wigner_D(const BasisIndex& idx, double theta, double phi, double chi) {
  if (!idx.valid()) throw DomainError("wigner_D: invalid basis index");
  const double norm = std::sqrt((2.0 * idx.l + 1.0) / (8.0 * std::numbers::pi * std::numbers::pi));
  return std::polar(norm * wigner_d(idx, theta), -(idx.k * phi + idx.n * chi));
}

}  // namespace spherecs
