#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spherecs/coherence.hpp"
#include "spherecs/gauss_table.hpp"
#include "spherecs/patterns.hpp"
#include "spherecs/phase_transition.hpp"
#include "spherecs/recover.hpp"
#include "spherecs/sensing.hpp"

namespace spherecs {

struct SolverOptions {
  SolverKind kind = SolverKind::Qcbp;
  QcbpOptions qcbp;
  std::size_t omp_sparsity = 0;  ///< 0 means min(m, N)
  double eta = 0.0;
};

RecoveryResult solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, const SolverOptions& options);

struct IgrfReport {
  GaussCoefficientTable recovered;
  Eigen::VectorXcd coefficients;  ///< recovered complex coefficients
  RecoveryResult result;
  double grid_error = 0.0;         ///< relative l2 field error on the latitude/longitude grid
  double coefficient_error = 0.0;  ///< relative l2 error of the complex coefficients
  std::size_t grid_points = 0;
};

/// Samples the real-form potential on an S2 pattern, recovers the complex coefficients and
/// compares fields on a grid of n_lat latitudes in [-pi/2, pi/2] (colatitude pi/2 - lat)
/// by n_lon longitudes in [0, 2 pi).
IgrfReport igrf_reconstruct(const GaussCoefficientTable& table, const SamplingPattern& pattern,
                            const SolverOptions& solver, int n_lat = 91, int n_lon = 180);

/// Wigner-D basis with n in {-1, +1}, 1 <= l < B, l-major then k, n ascending.
std::vector<BasisIndex> restricted_basis(int bandwidth);

Eigen::MatrixXcd restricted_matrix(const SamplingPattern& pattern,
                                   const std::vector<BasisIndex>& basis);

/// Each S2 point taken at chi = 0 and at chi = pi/2 (2m SO3 points).
SamplingPattern polarized_pattern(const SamplingPattern& s2);

/// Random-phase coefficients with moduli decay^j over a random ordering of the basis.
Eigen::VectorXcd compressible_coefficients(std::size_t n, double decay, std::uint64_t seed);

struct ForwardDemoReport {
  double mu = 0.0;                    ///< coherence of the restricted matrix
  std::vector<OrderPair> symmetric;   ///< congruent order pairs with |n| = 1
  bool full_coherence = false;        ///< mu >= 1 - 1e-6 or a congruent pair; solve skipped
  RecoveryResult result;
  double coefficient_error = 0.0;
  double resynthesis_error = 0.0;     ///< relative error at held-out random rotations
};

/// Synthesizes sum T_j D_j at the pattern, checks for full coherence, then recovers T.
ForwardDemoReport wigner_forward_demo(const Eigen::VectorXcd& coefficients,
                                      const SamplingPattern& pattern, int bandwidth,
                                      const SolverOptions& solver, std::uint64_t seed = 0,
                                      std::size_t holdout = 512);

}  // namespace spherecs
