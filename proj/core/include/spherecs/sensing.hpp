#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "spherecs/domain.hpp"
#include "spherecs/patterns.hpp"
#include "spherecs/specfun.hpp"

namespace spherecs {

/// Maps column q <-> (l, k, n) for a band-limited basis.
///
/// Ordering is l-major lexicographic, ascending in (l, k, n):
///   S2:  (0,0) (1,-1) (1,0) (1,1) (2,-2) ...
///   SO3: (0,0,0) (1,-1,-1) (1,-1,0) (1,-1,1) (1,0,-1) ...
/// Coefficient vectors use the same order. This is part of the file-format contract.
class BasisEnumeration {
public:
  BasisEnumeration() = default;
  BasisEnumeration(Domain domain, int bandwidth);

  Domain domain() const noexcept { return domain_; }
  int bandwidth() const noexcept { return bandwidth_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const BasisIndex& operator[](std::size_t q) const { return indices_[q]; }
  const std::vector<BasisIndex>& indices() const noexcept { return indices_; }

  /// Column of a basis index; throws InvalidArgument when it is outside the band.
  std::size_t column_of(const BasisIndex& idx) const;

private:
  Domain domain_ = Domain::S2;
  int bandwidth_ = 0;
  std::vector<BasisIndex> indices_;
};

/// N = B^2 on S2, B(2B-1)(2B+1)/3 on SO3.
std::size_t basis_dimension(Domain domain, int bandwidth);

BasisEnumeration enumerate_basis(Domain domain, int bandwidth);

/// Row weights applied to a sensing matrix.
enum class Preconditioner {
  None,
  SinSqrt,   ///< sin(theta)^(1/2), matches the uniform d theta d phi (d chi) measure
  Tan13,     ///< (sin^2 theta |cos theta|)^(1/6), matches the |tan theta|^(1/3) measure
};

double precondition_weight(Preconditioner kind, double theta);

struct SensingMatrix {
  Eigen::MatrixXcd entries;  ///< m x N, column-major
  SamplingPattern pattern;
  BasisEnumeration enumeration;
  Preconditioner preconditioner = Preconditioner::None;

  bool preconditioned() const noexcept { return preconditioner != Preconditioner::None; }
  Eigen::Index rows() const noexcept { return entries.rows(); }
  Eigen::Index cols() const noexcept { return entries.cols(); }
};

/// Value of basis function idx at one sample point (Y on S2, D on SO3).
std::complex<double> basis_value(Domain domain, const BasisIndex& idx, const SamplePoint& point);

/// A_{p,q} = basis function q at point p, optionally scaled by the row weight of point p.
/// Rows at theta in {0, pi} vanish under preconditioning; a warning is added to the
/// pattern provenance stored in the result.
SensingMatrix build_matrix(const SamplingPattern& pattern, int bandwidth,
                           Preconditioner preconditioner = Preconditioner::None);
SensingMatrix build_matrix(const SamplingPattern& pattern, int bandwidth, bool precondition);

/// y_p -> w(theta_p) y_p with the same weights build_matrix uses.
Eigen::VectorXcd precondition_rhs(const Eigen::VectorXcd& y, std::span<const double> thetas,
                                  Preconditioner preconditioner = Preconditioner::SinSqrt);

// Binary matrix export (little-endian):
//   bytes 0..7    magic "SPHCSMAT"
//   bytes 8..15   uint64 row count m
//   bytes 16..23  uint64 column count N
//   then m*N complex entries in column-major order, each as float64 re, float64 im.
void export_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& matrix);
Eigen::MatrixXcd import_matrix(const std::filesystem::path& path);

}  // namespace spherecs
