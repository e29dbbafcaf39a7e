#pragma once

// Special functions on S^2 and SO(3).
//
// Conventions (these differ between references, so check before comparing):
//  * assoc_legendre includes the Condon-Shortley phase (-1)^k.
//  * spherical_harmonic is orthonormal on the sphere under sin(theta) dtheta dphi,
//    Y_l^k = N_l^k P_l^k(cos theta) e^{i k phi}, N_l^k = sqrt((2l+1)/(4 pi) (l-k)!/(l+k)!).
//  * wigner_D is orthonormal on SO(3) under sin(theta) dtheta dphi dchi,
//    D_l^{k,n} = sqrt((2l+1)/(8 pi^2)) e^{-i k phi} d_l^{k,n}(cos theta) e^{-i n chi}.
//  * Half-integer angular momenta are not supported.

#include <complex>

namespace spherecs {

/// Identifies one basis function: degree l, orders k and n. n is 0 on S^2.
struct BasisIndex {
  int l = 0;
  int k = 0;
  int n = 0;

  bool valid() const noexcept;
  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Jacobi-polynomial parameters behind a Wigner d-function.
struct JacobiParams {
  int alpha = 0;   ///< polynomial degree, l - (xi + lambda)/2
  int xi = 0;      ///< |k - n|
  int lambda = 0;  ///< |k + n|
  double gamma = 1.0;  ///< alpha!(alpha+xi+lambda)! / ((alpha+xi)!(alpha+lambda)!)
  int omega = 1;   ///< +1 if n >= k, else (-1)^(n-k)

  /// Throws DomainError for an invalid index.
  static JacobiParams from(const BasisIndex& idx);
};

/// P_l^k(x) with Condon-Shortley phase, 0 <= k <= l, |x| <= 1.
/// Evaluated through the normalized recurrence; overflows only when the value itself does.
double assoc_legendre(int l, int k, double x);

/// sqrt((l-k)!/(l+k)!) P_l^k(x). Bounded by 1 in magnitude for all l.
double assoc_legendre_normalized(int l, int k, double x);

/// Jacobi polynomial P_alpha^(xi,lambda)(x) via the three-term recurrence in alpha.
double jacobi(int alpha, int xi, int lambda, double x);

/// Wigner small-d function d_l^{k,n}(cos theta), theta in [0, pi].
double wigner_d(const BasisIndex& idx, double theta);

/// Orthonormal spherical harmonic Y_l^k(theta, phi); negative k via conjugate symmetry.
std::complex<double> spherical_harmonic(int l, int k, double theta, double phi);

/// Orthonormal Wigner D-function D_l^{k,n}(theta, phi, chi).
std::complex<double> wigner_D(const BasisIndex& idx, double theta, double phi, double chi);

/// Wigner 3j symbol (l1 l2 l3; k1 k2 k3) for integer arguments.
/// Returns exactly 0.0 whenever a selection rule fails.
double wigner3j(int l1, int l2, int l3, int k1, int k2, int k3);

/// ln(n!) from a table computed once (n < 512) with lgamma fallback above.
double log_factorial(int n);

}  // namespace spherecs
