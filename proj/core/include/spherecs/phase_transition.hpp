#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spherecs/domain.hpp"
#include "spherecs/optimize.hpp"
#include "spherecs/patterns.hpp"
#include "spherecs/recover.hpp"
#include "spherecs/sensing.hpp"

namespace spherecs {

/// Sampling designs compared in recovery experiments. Proposed is equispaced elevation with
/// pattern-searched azimuths (and polarizations).
enum class PatternFamily { Proposed, Equiangular, Spiral, Fibonacci, Hammersley, Uniform, Tan13 };

std::string_view to_string(PatternFamily family);
PatternFamily parse_pattern_family(std::string_view text);
bool is_random(PatternFamily family);

/// Random families are solved preconditioned (SinSqrt for Uniform, Tan13 for Tan13).
Preconditioner family_preconditioner(PatternFamily family);

/// One m-point pattern of a family. seed feeds the random families and the optimizer start.
SamplingPattern family_pattern(PatternFamily family, int m, Domain domain, int bandwidth,
                               std::uint64_t seed, const OptimizerConfig& optimizer = {});

enum class SolverKind { Qcbp, Omp };
std::string_view to_string(SolverKind kind);
SolverKind parse_solver(std::string_view text);

struct PhaseTransitionSpec {
  Domain domain = Domain::S2;
  int bandwidth = 10;
  PatternFamily family = PatternFamily::Proposed;
  std::vector<int> m_grid;
  std::vector<int> s_grid;
  int trials = 50;
  std::uint64_t seed = 0;
  SolverKind solver = SolverKind::Qcbp;
  QcbpOptions qcbp;
  OptimizerConfig optimizer;
  double threshold = 1e-3;
  SignalDistribution distribution = SignalDistribution::ComplexGaussian;

  void validate() const;
};

struct PhaseCell {
  int m = 0;
  int s = 0;
  int trials = 0;
  int successes = 0;
  int errors = 0;  ///< trials whose solver threw; counted as failures
  double rate = 0.0;
};

/// Success-rate grid, m-major. Deterministic families use one pattern per m; random
/// families draw a fresh pattern per trial. Trial streams derive from (seed, m, s, trial).
std::vector<PhaseCell> phase_transition(const PhaseTransitionSpec& spec);

/// Smallest m whose success rate at sparsity s reaches `level`; empty when none does.
std::optional<int> transition_boundary(const std::vector<PhaseCell>& cells, int s,
                                       double level = 0.5);

/// m,s,trials,successes,rate
std::string phase_csv(const std::vector<PhaseCell>& cells);

}  // namespace spherecs
