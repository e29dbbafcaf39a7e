#include "spherecs/phase_transition.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>

#include "spherecs/error.hpp"
#include "spherecs/parallel.hpp"
#include "spherecs/rng.hpp"

namespace spherecs {
namespace {

std::string lower(std::string_view text) {
  std::string s(text);
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string_view to_string(PatternFamily family) {
  switch (family) {
    case PatternFamily::Proposed: return "proposed";
    case PatternFamily::Equiangular: return "equiangular";
    case PatternFamily::Spiral: return "spiral";
    case PatternFamily::Fibonacci: return "fibonacci";
    case PatternFamily::Hammersley: return "hammersley";
    case PatternFamily::Uniform: return "uniform";
    case PatternFamily::Tan13: return "tan13";
  }
  return "unknown";
}

PatternFamily parse_pattern_family(std::string_view text) {
  const std::string s = lower(text);
  for (auto f : {PatternFamily::Proposed, PatternFamily::Equiangular, PatternFamily::Spiral,
                 PatternFamily::Fibonacci, PatternFamily::Hammersley, PatternFamily::Uniform,
                 PatternFamily::Tan13}) {
    if (s == to_string(f)) return f;
  }
  throw InvalidArgument("unknown pattern family '" + std::string(text) + "'");
}

bool is_random(PatternFamily family) {
  return family == PatternFamily::Uniform || family == PatternFamily::Tan13;
}

Preconditioner family_preconditioner(PatternFamily family) {
  switch (family) {
    case PatternFamily::Uniform: return Preconditioner::SinSqrt;
    case PatternFamily::Tan13: return Preconditioner::Tan13;
    default: return Preconditioner::None;
  }
}

SamplingPattern family_pattern(PatternFamily family, int m, Domain domain, int bandwidth,
                               std::uint64_t seed, const OptimizerConfig& optimizer) {
  switch (family) {
    case PatternFamily::Proposed: {
      OptimizerConfig cfg = optimizer;
      cfg.seed = seed;
      const auto thetas = equispaced_elevation(m);
      OptimizerTrace trace = multistart_search(thetas, domain, bandwidth, cfg);
      return std::move(trace.pattern);
    }
    case PatternFamily::Equiangular: return regular_pattern(RegularKind::Equiangular, m, domain);
    case PatternFamily::Spiral: return regular_pattern(RegularKind::Spiral, m, domain);
    case PatternFamily::Fibonacci: return regular_pattern(RegularKind::Fibonacci, m, domain);
    case PatternFamily::Hammersley: return regular_pattern(RegularKind::Hammersley, m, domain);
    case PatternFamily::Uniform: return random_pattern(RandomMeasure::Uniform, m, domain, seed);
    case PatternFamily::Tan13: return random_pattern(RandomMeasure::Tan13, m, domain, seed);
  }
  throw InvalidArgument("family_pattern: unsupported family");
}

std::string_view to_string(SolverKind kind) { return kind == SolverKind::Qcbp ? "qcbp" : "omp"; }

SolverKind parse_solver(std::string_view text) {
  const std::string s = lower(text);
  if (s == "qcbp" || s == "bp") return SolverKind::Qcbp;
  if (s == "omp") return SolverKind::Omp;
  throw InvalidArgument("unknown solver '" + std::string(text) + "'");
}

void PhaseTransitionSpec::validate() const {
  if (bandwidth < 1) throw InvalidArgument("phase_transition: bandwidth must be >= 1");
  if (m_grid.empty() || s_grid.empty()) throw InvalidArgument("phase_transition: empty grid");
  if (trials < 1) throw InvalidArgument("phase_transition: trials must be >= 1");
  const auto n = static_cast<int>(basis_dimension(domain, bandwidth));
  for (int m : m_grid) {
    if (m < 2) throw InvalidArgument("phase_transition: m must be >= 2");
  }
  for (int s : s_grid) {
    if (s < 0 || s > n) throw InvalidArgument("phase_transition: s must lie in [0, N]");
  }
  if (!(threshold > 0.0)) throw InvalidArgument("phase_transition: threshold must be positive");
}

std::vector<PhaseCell> phase_transition(const PhaseTransitionSpec& spec) {
  spec.validate();
  const std::size_t n = basis_dimension(spec.domain, spec.bandwidth);
  const std::uint64_t tag = static_cast<std::uint64_t>(spec.family);
  const Preconditioner pre = family_preconditioner(spec.family);
  std::vector<PhaseCell> cells;

  for (int m : spec.m_grid) {
    const auto mu64 = static_cast<std::uint64_t>(m);
    std::optional<SensingMatrix> fixed;
    if (!is_random(spec.family)) {
      const SamplingPattern pattern =
          family_pattern(spec.family, m, spec.domain, spec.bandwidth,
                         Rng::derive(spec.seed, {mu64, tag}), spec.optimizer);
      fixed = build_matrix(pattern, spec.bandwidth, pre);
    }
    for (int s : spec.s_grid) {
      const auto s64 = static_cast<std::uint64_t>(s);
      std::atomic<int> successes{0};
      std::atomic<int> errors{0};
      parallel_for(static_cast<std::size_t>(spec.trials), [&](std::size_t t) {
        const std::uint64_t stream = Rng::derive(spec.seed, {mu64, s64, static_cast<std::uint64_t>(t)});
        try {
          std::optional<SensingMatrix> own;
          if (!fixed) {
            own = build_matrix(family_pattern(spec.family, m, spec.domain, spec.bandwidth,
                                              Rng::derive(stream, {1})),
                               spec.bandwidth, pre);
          }
          const SensingMatrix& a = fixed ? *fixed : *own;
          const Eigen::VectorXcd g =
              sparse_signal({n, static_cast<std::size_t>(s), spec.distribution, Rng::derive(stream, {0})});
          const Eigen::VectorXcd y = a.entries * g;
          RecoveryResult r;
          if (spec.solver == SolverKind::Qcbp) {
            r = qcbp_solve({a.entries, y, 0.0}, spec.qcbp);
          } else {
            r = omp_solve(a.entries, y, static_cast<std::size_t>(s));
          }
          if (relative_error(r.z, g) <= spec.threshold) ++successes;
        } catch (const std::exception&) {
          ++errors;
        }
      });
      PhaseCell cell;
      cell.m = m;
      cell.s = s;
      cell.trials = spec.trials;
      cell.successes = successes.load();
      cell.errors = errors.load();
      cell.rate = static_cast<double>(cell.successes) / spec.trials;
      cells.push_back(cell);
    }
  }
  return cells;
}

std::optional<int> transition_boundary(const std::vector<PhaseCell>& cells, int s, double level) {
  std::optional<int> best;
  for (const auto& c : cells) {
    if (c.s == s && c.rate >= level && (!best || c.m < *best)) best = c.m;
  }
  return best;
}

std::string phase_csv(const std::vector<PhaseCell>& cells) {
  std::string out = "m,s,trials,successes,rate\n";
  char buf[128];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g\n", c.m, c.s, c.trials, c.successes, c.rate);
    out += buf;
  }
  return out;
}

}  // namespace spherecs
