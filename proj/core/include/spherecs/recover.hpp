#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spherecs {

/// No z satisfies ||A z - y|| <= eta (checked by least squares before iterating).
class InfeasibleProblem : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RecoveryProblem {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd y;
  double eta = 0.0;  ///< plain bound on ||A z - y||_2; any sqrt(m) eps scaling is the caller's

  void validate() const;
};

struct RecoveryResult {
  Eigen::VectorXcd z;
  double residual = 0.0;  ///< ||A z - y||_2
  int iterations = 0;
  std::vector<std::size_t> support;
  bool converged = false;
  bool rank_deficient = false;  ///< OMP only: a selected submatrix lost column rank
  double objective = 0.0;       ///< ||z||_1 (sum of complex moduli)
  double dual_bound = 0.0;      ///< certified lower bound on the optimum (QCBP)
};

struct QcbpOptions {
  int max_iterations = 20000;
  double gap_tol = 1e-9;      ///< relative duality gap for convergence
  double feas_tol = 1e-8;     ///< relative to max(1, ||y||)
  double support_tol = 1e-6;  ///< support entries exceed this times ||z||_inf
  bool polish = true;         ///< exact least-squares refinement on the active set (eta = 0)
  int check_every = 10;
};

/// min ||z||_1 subject to ||A z - y||_2 <= eta, complex-valued.
///
/// ADMM on the splitting x = z, A x = w with w in the constraint ball. A is scaled to unit
/// spectral norm internally. Convergence is declared only on a certified relative duality
/// gap: the primal iterate is projected back onto the feasible set and a dual feasible
/// point is built from the multiplier of A x = w.
/// Throws InfeasibleProblem when min ||A z - y|| exceeds eta.
RecoveryResult qcbp_solve(const RecoveryProblem& problem, const QcbpOptions& options = {});

/// Orthogonal matching pursuit: picks argmax |a_q^H r| / ||a_q||, re-solves least squares on
/// the support (minimum-norm when rank-deficient), stops after s atoms or when
/// ||r|| <= eta.
RecoveryResult omp_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, std::size_t s,
                         double eta = 0.0);

enum class SignalDistribution { ComplexGaussian, RealGaussian };

struct SparseSignalSpec {
  std::size_t n = 0;
  std::size_t s = 0;
  /// ComplexGaussian: re, im each N(0, 1/2) so E|x|^2 = 1. RealGaussian: N(0, 1).
  SignalDistribution distribution = SignalDistribution::ComplexGaussian;
  std::uint64_t seed = 0;
};

/// Uniformly random support of size s, i.i.d. Gaussian values on it. s = 0 gives zero.
Eigen::VectorXcd sparse_signal(const SparseSignalSpec& spec);

/// sigma_s(x)_p: l_p norm of x with its s largest-modulus entries removed.
double best_s_term_error(const Eigen::VectorXcd& x, std::size_t s, double p = 1.0);

/// ||z - g|| / ||g||, or ||z|| when g = 0.
double relative_error(const Eigen::VectorXcd& z, const Eigen::VectorXcd& g);

double l1_norm(const Eigen::VectorXcd& x);

}  // namespace spherecs
