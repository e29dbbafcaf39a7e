#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "spherecs/domain.hpp"
#include "spherecs/patterns.hpp"

namespace spherecs {

struct OptimizerConfig {
  double initial_step = std::numbers::pi / 8.0;
  double decay = 0.5;
  int max_iterations = 5000;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  /// Search stops once the step falls below this; no candidate can then move an angle
  /// by more than rounding. 0 disables.
  double min_step = 1e-10;
  /// Independent starts for multistart_search (seeds derived from seed).
  int restarts = 8;

  /// Throws InvalidArgument on an out-of-range field.
  void validate() const;
};

enum class StopReason { Tolerance, MaxIterations, StepFloor };
std::string_view to_string(StopReason reason);

struct IterationRecord {
  int iteration = 0;
  double mu = 0.0;     ///< coherence after the iteration
  double step = 0.0;   ///< step used in the iteration
  bool accepted = false;
};

struct OptimizerTrace {
  std::vector<IterationRecord> records;
  SamplingPattern pattern;
  double mu = 0.0;
  double lower_bound = 0.0;
  double initial_mu = 0.0;
  StopReason stop = StopReason::MaxIterations;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;
};

/// Coherence as a function of the free angles with elevations fixed.
///
/// Angles are laid out phi_1..phi_m, then chi_1..chi_m on SO(3). Column norms do not
/// depend on the free angles, and pairs with equal orders contribute a constant, so only
/// normalized Gram entries of pairs with differing orders are kept and updated one
/// coordinate at a time.
class CoherenceObjective {
public:
  CoherenceObjective(std::span<const double> thetas, Domain domain, int bandwidth);

  std::size_t num_points() const noexcept { return m_; }
  std::size_t num_angles() const noexcept { return domain_ == Domain::S2 ? m_ : 2 * m_; }
  Domain domain() const noexcept { return domain_; }

  /// Max over equal-order pairs: the elevation-only floor of the objective.
  double floor() const noexcept { return floor_; }

  void set_angles(std::span<const double> angles);
  const std::vector<double>& angles() const noexcept { return angles_; }
  double value() const noexcept { return std::max(floor_, var_max_); }

  /// Coherence after moving coordinate j to angle. Returns +inf as soon as some pair
  /// reaches `cutoff`, so the result is exact only when it is below cutoff.
  double probe(std::size_t j, double angle,
               double cutoff = std::numeric_limits<double>::infinity()) const;

  /// Applies the move and updates the stored Gram entries.
  void commit(std::size_t j, double angle);

  /// Recomputes the Gram entries from scratch (removes accumulated rounding).
  void rebuild();

private:
  struct Pair {
    std::uint32_t q;
    std::uint32_t r;
    std::uint32_t table;  ///< index of the (dk, dn) phase
  };

  void phase_table(std::size_t p, double phi, double chi, std::vector<std::complex<double>>& out) const;

  Domain domain_;
  std::size_t m_ = 0;
  int span_ = 0;  ///< max |dk| = 2(B-1)
  std::vector<Pair> pairs_;
  std::vector<double> weights_;  ///< [p * pairs + i], normalized c_q(theta_p) c_r(theta_p)
  std::vector<std::complex<double>> gram_;
  std::vector<double> angles_;
  double floor_ = 0.0;
  double var_max_ = 0.0;
  mutable std::vector<std::uint32_t> hot_;  ///< pairs that recently blocked a move
};

/// Coherence of the (unpreconditioned) matrix built from fixed elevations and free
/// angles, computed by a full matrix build and Gram.
double evaluate_candidate(std::span<const double> thetas, std::span<const double> angles,
                          Domain domain, int bandwidth);

/// Coordinate pattern search over the free angles from a uniform random start.
/// Candidates are scanned coordinate-ascending, +step before -step, phi block before chi;
/// the first strict improvement is accepted, otherwise the step is multiplied by decay.
OptimizerTrace pattern_search(std::span<const double> thetas, Domain domain, int bandwidth,
                              const OptimizerConfig& config);

/// Best of config.restarts runs of pattern_search with seeds derive(config.seed, {r}).
/// Stops early once a run reaches the tolerance.
OptimizerTrace multistart_search(std::span<const double> thetas, Domain domain, int bandwidth,
                                 const OptimizerConfig& config);

/// iter,mu,delta,accepted
std::string trace_csv(const OptimizerTrace& trace);

}  // namespace spherecs
