#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "spherecs/domain.hpp"
#include "spherecs/patterns.hpp"
#include "spherecs/sensing.hpp"
#include "spherecs/specfun.hpp"

namespace spherecs {

/// Largest normalized inner product between distinct columns.
struct CoherenceValue {
  double mu = 0.0;
  std::size_t q = 0;  ///< argmax pair, q < r, first in (q, r) lexicographic order on ties
  std::size_t r = 0;
};

/// Mutual coherence of a raw matrix from its exact Gram A^H A.
/// Throws ZeroNormError if any column vanishes and InvalidArgument if N < 2.
CoherenceValue coherence_of(const Eigen::MatrixXcd& a);

/// Elevation-only lower bound on the coherence: the largest normalized inner product over
/// equal-order column pairs of distinct degree, which no choice of phi (or chi) can change.
struct ElevationBound {
  double value = 0.0;
  BasisIndex first;   ///< degree l, shared orders (k, n) of the maximizing pair
  int second_degree = 0;
  /// Legendre (B-1, B-3) ratio reported on its own; NaN when B < 3.
  double legendre_pair = 0.0;
};

/// weights, when non-empty, are per-row scale factors (e.g. the preconditioner).
/// Throws ZeroNormError when an equal-order vector vanishes on the given elevations.
ElevationBound elevation_lower_bound(std::span<const double> thetas, int bandwidth, Domain domain,
                                     std::span<const double> weights = {});

/// |sum_p P_{B-1}(x_p) P_{B-3}(x_p)| / (||P_{B-1}|| ||P_{B-3}||) with x_p = cos theta_p; B >= 3.
double legendre_pair_bound(std::span<const double> thetas, int bandwidth,
                           std::span<const double> weights = {});

/// max(0, sqrt((N - m) / (m (N - 1)))).
double welch_bound(std::size_t m, std::size_t n);

struct CoherenceReport {
  double mu = 0.0;
  std::size_t q = 0;
  std::size_t r = 0;
  double elevation_lower_bound = 0.0;
  double legendre_pair_bound = 0.0;
  double welch_bound = 0.0;
  std::chrono::duration<double> gram_time{0.0};
};

CoherenceReport mutual_coherence(const SensingMatrix& a);

/// CSV header/row for a report: m,N,B,domain,pattern,mu,q,r,lb_elev,welch
std::string coherence_csv_header();
std::string coherence_csv_row(const SensingMatrix& a, const CoherenceReport& report,
                              const std::string& pattern_name);

/// sum_p conj(f1(point_p)) f2(point_p) evaluated through the Wigner 3j expansion of the
/// product f1-bar f2 into single basis functions (Y on S2, D on SO3). Independent of the
/// direct column inner product.
std::complex<double> gram_via_3j(const BasisIndex& first, const BasisIndex& second,
                                 const SamplingPattern& pattern);

/// An order k (S2, n == 0) or order pair (k, n) (SO3) for which the azimuth/polarization
/// congruence 2 n chi_i + 2 k phi_i == const (mod 2 pi) holds for every sample; the columns
/// (l, k, n) and (l, -k, -n) are then collinear and the coherence is 1.
struct OrderPair {
  int k = 0;
  int n = 0;
  friend bool operator==(const OrderPair&, const OrderPair&) = default;
};

/// Returns every such order (pair) with max(|k|,|n|) <= B-1, normalized so the first
/// nonzero order is positive.
std::vector<OrderPair> detect_modular_symmetry(const SamplingPattern& pattern, int bandwidth,
                                               double tol = 1e-9);

}  // namespace spherecs
