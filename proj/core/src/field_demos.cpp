#include "spherecs/field_demos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spherecs/error.hpp"
#include "spherecs/parallel.hpp"
#include "spherecs/rng.hpp"

namespace spherecs {

RecoveryResult solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& y, const SolverOptions& options) {
  if (options.kind == SolverKind::Qcbp) return qcbp_solve({a, y, options.eta}, options.qcbp);
  const auto cap = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  const std::size_t s = options.omp_sparsity == 0 ? cap : std::min(options.omp_sparsity, cap);
  return omp_solve(a, y, s, options.eta);
}

IgrfReport igrf_reconstruct(const GaussCoefficientTable& table, const SamplingPattern& pattern,
                            const SolverOptions& solver, int n_lat, int n_lon) {
  table.validate();
  if (pattern.domain() != Domain::S2) throw InvalidArgument("igrf_reconstruct: pattern must be on S2");
  if (pattern.empty()) throw InvalidArgument("igrf_reconstruct: empty pattern");
  if (n_lat < 2 || n_lon < 1) throw InvalidArgument("igrf_reconstruct: grid too small");

  const SensingMatrix a = build_matrix(pattern, table.bandwidth);
  Eigen::VectorXcd y(static_cast<Eigen::Index>(pattern.size()));
  for (std::size_t p = 0; p < pattern.size(); ++p) {
    y(static_cast<Eigen::Index>(p)) = gauss_potential(table, pattern[p].theta, pattern[p].phi);
  }

  IgrfReport report;
  report.result = solve(a.entries, y, solver);
  report.coefficients = report.result.z;
  report.recovered = complex_to_gauss(report.coefficients, table.bandwidth, table.reference_radius,
                                      table.evaluation_radius);
  report.recovered.epoch = table.epoch;
  report.coefficient_error = relative_error(report.coefficients, gauss_to_complex(table));

  double diff = 0.0;
  double ref = 0.0;
  for (int i = 0; i < n_lat; ++i) {
    const double lat = -std::numbers::pi / 2 + std::numbers::pi * i / (n_lat - 1);
    const double theta = std::clamp(std::numbers::pi / 2 - lat, 0.0, std::numbers::pi);
    for (int j = 0; j < n_lon; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_lon;
      const double truth = gauss_potential(table, theta, phi);
      const double got = gauss_potential(report.recovered, theta, phi);
      diff += (got - truth) * (got - truth);
      ref += truth * truth;
    }
  }
  report.grid_points = static_cast<std::size_t>(n_lat) * static_cast<std::size_t>(n_lon);
  report.grid_error = ref == 0.0 ? std::sqrt(diff) : std::sqrt(diff / ref);
  return report;
}

std::vector<BasisIndex> restricted_basis(int bandwidth) {
  if (bandwidth < 2) throw InvalidArgument("restricted_basis: bandwidth must be >= 2");
  std::vector<BasisIndex> out;
  for (int l = 1; l < bandwidth; ++l) {
    for (int k = -l; k <= l; ++k) {
      out.push_back({l, k, -1});
      out.push_back({l, k, 1});
    }
  }
  return out;
}

Eigen::MatrixXcd restricted_matrix(const SamplingPattern& pattern, const std::vector<BasisIndex>& basis) {
  if (pattern.domain() != Domain::SO3) throw InvalidArgument("restricted_matrix: pattern must be on SO3");
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(pattern.size()), static_cast<Eigen::Index>(basis.size()));
  parallel_for(basis.size(), [&](std::size_t q) {
    for (std::size_t p = 0; p < pattern.size(); ++p) {
      a(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          basis_value(Domain::SO3, basis[q], pattern[p]);
    }
  });
  return a;
}

SamplingPattern polarized_pattern(const SamplingPattern& s2) {
  if (s2.domain() != Domain::S2) throw InvalidArgument("polarized_pattern: expects an S2 pattern");
  std::vector<SamplePoint> pts;
  pts.reserve(2 * s2.size());
  for (const auto& p : s2.points()) {
    pts.push_back({p.theta, p.phi, 0.0});
    pts.push_back({p.theta, p.phi, std::numbers::pi / 2});
  }
  Provenance prov = s2.provenance();
  prov.set_param("polarized", "0,pi/2");
  return SamplingPattern(Domain::SO3, std::move(pts), std::move(prov));
}

Eigen::VectorXcd compressible_coefficients(std::size_t n, double decay, std::uint64_t seed) {
  if (!(decay > 0.0 && decay < 1.0)) throw InvalidArgument("compressible_coefficients: decay must lie in (0, 1)");
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(rng.index(i))]);
  Eigen::VectorXcd t(static_cast<Eigen::Index>(n));
  double mag = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    t(static_cast<Eigen::Index>(order[j])) = std::polar(mag, rng.uniform(0.0, 2.0 * std::numbers::pi));
    mag *= decay;
  }
  return t;
}

ForwardDemoReport wigner_forward_demo(const Eigen::VectorXcd& coefficients, const SamplingPattern& pattern,
                                      int bandwidth, const SolverOptions& solver, std::uint64_t seed,
                                      std::size_t holdout) {
  if (pattern.domain() != Domain::SO3) throw InvalidArgument("wigner_forward_demo: pattern must be on SO3");
  const auto basis = restricted_basis(bandwidth);
  if (static_cast<std::size_t>(coefficients.size()) != basis.size()) {
    throw InvalidArgument("wigner_forward_demo: expected " + std::to_string(basis.size()) + " coefficients");
  }
  ForwardDemoReport report;
  const Eigen::MatrixXcd a = restricted_matrix(pattern, basis);
  report.mu = coherence_of(a).mu;
  for (const auto& pair : detect_modular_symmetry(pattern, bandwidth)) {
    if (std::abs(pair.n) == 1) report.symmetric.push_back(pair);
  }
  report.full_coherence = report.mu >= 1.0 - 1e-6 || !report.symmetric.empty();
  if (report.full_coherence) {
    report.coefficient_error = std::numeric_limits<double>::quiet_NaN();
    report.resynthesis_error = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  report.result = solve(a, a * coefficients, solver);
  report.coefficient_error = relative_error(report.result.z, coefficients);

  Rng rng(seed);
  std::vector<SamplePoint> held(holdout);
  for (auto& p : held) {
    p.theta = std::acos(std::clamp(rng.uniform(-1.0, 1.0), -1.0, 1.0));
    p.phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    p.chi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  const Eigen::MatrixXcd h = restricted_matrix(SamplingPattern(Domain::SO3, std::move(held)), basis);
  report.resynthesis_error = relative_error(h * report.result.z, h * coefficients);
  return report;
}

}  // namespace spherecs
