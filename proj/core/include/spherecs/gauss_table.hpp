#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spherecs {

/// Real Gauss coefficients g_l^k, h_l^k (nT) of a scalar potential, 1 <= l < B, 0 <= k <= l.
///
/// The potential is V = a sum_l (a/r)^(l+1) sum_k S_l^k P_l^k(cos theta) (g cos k phi + h sin k phi)
/// with P_l^k carrying the Condon-Shortley phase and S_l^k = (-1)^k sqrt((2 - delta_k0)(l-k)!/(l+k)!),
/// so S_l^k P_l^k is the usual Schmidt semi-normalized function.
struct GaussCoefficientTable {
  double epoch = 2015.0;
  int bandwidth = 2;
  double reference_radius = 6371.2;   ///< a, km
  double evaluation_radius = 6371.2;  ///< r, km

  GaussCoefficientTable() { resize(2); }
  explicit GaussCoefficientTable(int bandwidth) { resize(bandwidth); }

  void resize(int bandwidth);
  double& g(int l, int k) { return g_[slot(l, k)]; }
  double& h(int l, int k) { return h_[slot(l, k)]; }
  double g(int l, int k) const { return g_[slot(l, k)]; }
  double h(int l, int k) const { return h_[slot(l, k)]; }

  /// Throws InvalidArgument for B < 2 or non-positive radii.
  void validate() const;

  /// Number of nonzero complex coefficients the table maps to (k > 0 terms count twice).
  std::size_t complex_sparsity(double tol = 0.0) const;

private:
  std::size_t slot(int l, int k) const;
  std::vector<double> g_;
  std::vector<double> h_;
};

/// Reads whitespace lines `g l k value` / `h l k value`. Optional lines `epoch value`,
/// `radius value` (a) and `altitude_radius value` (r); `#` starts a comment. B is one more
/// than the largest degree present. Every g_l^k and every h_l^k with k > 0 must appear.
/// Throws ParseError with the offending line.
GaussCoefficientTable load_gauss_table(const std::filesystem::path& path);
GaussCoefficientTable parse_gauss_table(const std::string& text);
std::string format_gauss_table(const GaussCoefficientTable& table);

/// Table with exactly s nonzero complex coefficients at random positions, values Gaussian
/// with a degree-decaying scale. Throws when s exceeds B^2 - 1.
GaussCoefficientTable synthetic_gauss_table(int bandwidth, std::size_t s, std::uint64_t seed);

/// Coefficients c over the S2 basis (l-major order, see BasisEnumeration) with
/// V(theta, phi) = sum c_l^k Y_l^k(theta, phi).
Eigen::VectorXcd gauss_to_complex(const GaussCoefficientTable& table);

/// Inverse of gauss_to_complex. A vector that is not conjugate-symmetric is projected onto
/// the real-field subspace first; the l = 0 entry is dropped.
GaussCoefficientTable complex_to_gauss(const Eigen::VectorXcd& c, int bandwidth,
                                       double reference_radius = 6371.2,
                                       double evaluation_radius = 6371.2);

/// V(theta, phi) from the real form; theta is colatitude.
double gauss_potential(const GaussCoefficientTable& table, double theta, double phi);

}  // namespace spherecs
