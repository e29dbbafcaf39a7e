#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spherecs/domain.hpp"
#include "spherecs/error.hpp"
#include "spherecs/optimize.hpp"
#include "spherecs/phase_transition.hpp"
#include "spherecs/recover.hpp"
#include "spherecs/sensing.hpp"

namespace spherecs {

/// Invalid configuration value; line() is the line of the offending key when known.
class ConfigError : public ParseError {
public:
  using ParseError::ParseError;
};

enum class ExperimentKind { CoherenceCompare, OptimizePattern, PhaseTransition, IgrfDemo, WignerForwardDemo };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

// Config file: one `key = value` per line, `#` starts a comment, blank lines ignored.
// Integer grids are `a,b,c` or `start:stop:step` (inclusive). Every key is optional and
// defaults as below; unknown and repeated keys are errors.
//
//   experiment          coherence_compare | optimize_pattern | phase_transition |
//                       igrf_demo | wigner_forward_demo
//   domain              S2 | SO3
//   bandwidth           B
//   m                   sample counts
//   s                   sparsities (phase_transition)
//   patterns            proposed,equiangular,spiral,fibonacci,hammersley,uniform,tan13
//   trials, threshold   phase_transition trials and success threshold
//   seed                base seed (the CLI --seed overrides it)
//   solver              qcbp | omp
//   precondition        none | sinsqrt | tan13 | auto   (coherence_compare; auto = per family)
//   optimizer.initial_step, optimizer.decay, optimizer.max_iterations,
//   optimizer.tolerance, optimizer.min_step, optimizer.restarts
//   qcbp.max_iterations, qcbp.gap_tol, qcbp.feas_tol
//   igrf.table          Gauss coefficient file; empty for a synthetic table
//   igrf.sparsity       nonzero complex coefficients of the synthetic table
//   igrf.grid_lat, igrf.grid_lon
//   forward.sparsity    nonzero coefficients (used when forward.decay = 0)
//   forward.decay       geometric decay of a compressible coefficient vector
//   forward.polarized   true: S2 patterns doubled at chi in {0, pi/2}
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::CoherenceCompare;
  Domain domain = Domain::S2;
  int bandwidth = 10;
  std::vector<int> m_grid{20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<int> s_grid{5, 10, 15, 20, 25};
  std::vector<PatternFamily> patterns{PatternFamily::Proposed, PatternFamily::Equiangular,
                                      PatternFamily::Spiral, PatternFamily::Fibonacci,
                                      PatternFamily::Hammersley};
  int trials = 50;
  double threshold = 1e-3;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::Qcbp;
  std::string precondition = "none";
  OptimizerConfig optimizer;
  QcbpOptions qcbp;

  std::string igrf_table;
  std::size_t igrf_sparsity = 15;
  int grid_lat = 91;
  int grid_lon = 180;

  std::size_t forward_sparsity = 10;
  double forward_decay = 0.0;
  bool forward_polarized = true;

  /// Throws ConfigError naming the key at fault.
  void validate() const;
};

/// With `expected` set, a file without an `experiment` key takes that kind and a file naming
/// a different one is rejected.
ExperimentConfig parse_config(const std::string& text,
                              std::optional<ExperimentKind> expected = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<ExperimentKind> expected = std::nullopt);

/// Every key, in a form parse_config reads back to the same configuration.
std::string format_config(const ExperimentConfig& config);

std::vector<int> parse_int_grid(std::string_view text);

}  // namespace spherecs
