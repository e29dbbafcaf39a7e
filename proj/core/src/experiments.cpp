#include "spherecs/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "spherecs/coherence.hpp"
#include "spherecs/field_demos.hpp"
#include "spherecs/gauss_table.hpp"
#include "spherecs/pattern_io.hpp"
#include "spherecs/rng.hpp"

namespace spherecs {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Run {
public:
  Run(const ExperimentConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {
    summary_.kind = cfg.kind;
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    write_file_atomic(path, content);
    summary_.files.push_back(path);
  }

  void pattern(const std::string& name, const SamplingPattern& p) {
    const fs::path path = dir_ / name;
    save_pattern(path, p);
    summary_.files.push_back(path);
  }

  template <class F>
  auto stage(const std::string& name, F&& body) {
    const auto start = Clock::now();
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      summary_.stages.push_back({name, std::chrono::duration<double>(Clock::now() - start).count()});
    } else {
      auto out = body();
      summary_.stages.push_back({name, std::chrono::duration<double>(Clock::now() - start).count()});
      return out;
    }
  }

  void note(std::string text) { summary_.notes.push_back(std::move(text)); }

  std::uint64_t seed_for(std::initializer_list<std::uint64_t> keys) const {
    return Rng::derive(cfg_.seed, keys);
  }

  ExperimentSummary& summary() { return summary_; }
  const ExperimentConfig& cfg() const { return cfg_; }

private:
  const ExperimentConfig& cfg_;
  fs::path dir_;
  ExperimentSummary summary_;
};

Preconditioner preconditioner_for(const std::string& mode, PatternFamily family) {
  if (mode == "auto") return family_preconditioner(family);
  if (mode == "sinsqrt") return Preconditioner::SinSqrt;
  if (mode == "tan13") return Preconditioner::Tan13;
  return Preconditioner::None;
}

std::uint64_t tag(PatternFamily f) { return static_cast<std::uint64_t>(f); }

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions s;
  s.kind = cfg.solver;
  s.qcbp = cfg.qcbp;
  return s;
}

void coherence_compare(Run& run) {
  const auto& cfg = run.cfg();
  std::string csv = coherence_csv_header() + "\n";
  for (PatternFamily family : cfg.patterns) {
    const std::string name(to_string(family));
    for (int m : cfg.m_grid) {
      const auto seed = run.seed_for({static_cast<std::uint64_t>(m), tag(family)});
      const SamplingPattern p = run.stage(name + " m=" + std::to_string(m) + " pattern", [&] {
        return family_pattern(family, m, cfg.domain, cfg.bandwidth, seed, cfg.optimizer);
      });
      const SensingMatrix a = build_matrix(p, cfg.bandwidth, preconditioner_for(cfg.precondition, family));
      const CoherenceReport report = mutual_coherence(a);
      csv += coherence_csv_row(a, report, name) + "\n";
      if (family == PatternFamily::Proposed) run.pattern("pattern_proposed_m" + std::to_string(m) + ".txt", p);
    }
  }
  run.write("coherence.csv", csv_document(csv));
}

void optimize_pattern(Run& run) {
  const auto& cfg = run.cfg();
  std::string csv = "m,mu,lower_bound,welch,stop,iterations,evaluations\n";
  const std::size_t n = basis_dimension(cfg.domain, cfg.bandwidth);
  for (int m : cfg.m_grid) {
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = run.seed_for({static_cast<std::uint64_t>(m)});
    const auto thetas = equispaced_elevation(m);
    const OptimizerTrace trace = run.stage("optimize m=" + std::to_string(m), [&] {
      return multistart_search(thetas, cfg.domain, cfg.bandwidth, oc);
    });
    csv += std::to_string(m) + "," + fmt(trace.mu) + "," + fmt(trace.lower_bound) + "," +
           fmt(welch_bound(static_cast<std::size_t>(m), n)) + "," + std::string(to_string(trace.stop)) +
           "," + std::to_string(trace.records.size()) + "," + std::to_string(trace.evaluations) + "\n";
    run.write("trace_m" + std::to_string(m) + ".csv", csv_document(trace_csv(trace)));
    run.pattern("pattern_m" + std::to_string(m) + ".txt", trace.pattern);
  }
  run.write("optimize.csv", csv_document(csv));
}

void phase_transition_run(Run& run) {
  const auto& cfg = run.cfg();
  std::string bounds = "pattern,s,boundary_m\n";
  for (PatternFamily family : cfg.patterns) {
    PhaseTransitionSpec spec;
    spec.domain = cfg.domain;
    spec.bandwidth = cfg.bandwidth;
    spec.family = family;
    spec.m_grid = cfg.m_grid;
    spec.s_grid = cfg.s_grid;
    spec.trials = cfg.trials;
    spec.seed = run.seed_for({tag(family)});
    spec.solver = cfg.solver;
    spec.qcbp = cfg.qcbp;
    spec.optimizer = cfg.optimizer;
    spec.threshold = cfg.threshold;
    const std::string name(to_string(family));
    const auto cells = run.stage("phase " + name, [&] { return phase_transition(spec); });
    int errors = 0;
    for (const auto& c : cells) errors += c.errors;
    if (errors > 0) run.note(name + ": " + std::to_string(errors) + " trials failed with a solver error");
    run.write("phase_" + name + ".csv", csv_document(phase_csv(cells)));
    for (int s : cfg.s_grid) {
      const auto b = transition_boundary(cells, s);
      bounds += name + "," + std::to_string(s) + "," + (b ? std::to_string(*b) : std::string("NA")) + "\n";
    }
  }
  run.write("boundary.csv", csv_document(bounds));
}

GaussCoefficientTable truncate(const GaussCoefficientTable& t, int bandwidth) {
  GaussCoefficientTable out(bandwidth);
  out.epoch = t.epoch;
  out.reference_radius = t.reference_radius;
  out.evaluation_radius = t.evaluation_radius;
  for (int l = 1; l < bandwidth; ++l) {
    for (int k = 0; k <= l; ++k) {
      out.g(l, k) = t.g(l, k);
      out.h(l, k) = t.h(l, k);
    }
  }
  return out;
}

void igrf_demo(Run& run) {
  const auto& cfg = run.cfg();
  GaussCoefficientTable table;
  if (cfg.igrf_table.empty()) {
    table = synthetic_gauss_table(cfg.bandwidth, cfg.igrf_sparsity, run.seed_for({0}));
  } else {
    table = load_gauss_table(cfg.igrf_table);
    if (table.bandwidth < cfg.bandwidth) {
      throw ConfigError("key 'igrf.table': table bandwidth " + std::to_string(table.bandwidth) +
                        " is below the configured " + std::to_string(cfg.bandwidth));
    }
    table = truncate(table, cfg.bandwidth);
  }
  run.write("table_truth.txt", format_gauss_table(table));
  const std::size_t s = table.complex_sparsity();
  std::string csv = "pattern,m,s,grid_error,coefficient_error,residual,iterations,converged\n";
  for (PatternFamily family : cfg.patterns) {
    const std::string name(to_string(family));
    for (int m : cfg.m_grid) {
      const auto seed = run.seed_for({static_cast<std::uint64_t>(m), tag(family)});
      const SamplingPattern p = family_pattern(family, m, Domain::S2, cfg.bandwidth, seed, cfg.optimizer);
      const IgrfReport rep = run.stage("igrf " + name + " m=" + std::to_string(m), [&] {
        return igrf_reconstruct(table, p, solver_options(cfg), cfg.grid_lat, cfg.grid_lon);
      });
      csv += name + "," + std::to_string(m) + "," + std::to_string(s) + "," + fmt(rep.grid_error) + "," +
             fmt(rep.coefficient_error) + "," + fmt(rep.result.residual) + "," +
             std::to_string(rep.result.iterations) + "," + (rep.result.converged ? "1" : "0") + "\n";
      run.write("table_" + name + "_m" + std::to_string(m) + ".txt", format_gauss_table(rep.recovered));
    }
  }
  run.write("igrf.csv", csv_document(csv));
}

void wigner_forward(Run& run) {
  const auto& cfg = run.cfg();
  const std::size_t n = restricted_basis(cfg.bandwidth).size();
  const Eigen::VectorXcd coeffs =
      cfg.forward_decay > 0.0
          ? compressible_coefficients(n, cfg.forward_decay, run.seed_for({0}))
          : sparse_signal({n, cfg.forward_sparsity, SignalDistribution::ComplexGaussian, run.seed_for({0})});
  std::string csv = "pattern,m,samples,mu,full_coherence,coefficient_error,resynthesis_error,converged\n";
  for (PatternFamily family : cfg.patterns) {
    const std::string name(to_string(family));
    for (int m : cfg.m_grid) {
      const auto seed = run.seed_for({static_cast<std::uint64_t>(m), tag(family)});
      const SamplingPattern p =
          cfg.forward_polarized
              ? polarized_pattern(family_pattern(family, m, Domain::S2, cfg.bandwidth, seed, cfg.optimizer))
              : family_pattern(family, m, Domain::SO3, cfg.bandwidth, seed, cfg.optimizer);
      const ForwardDemoReport rep = run.stage("forward " + name + " m=" + std::to_string(m), [&] {
        return wigner_forward_demo(coeffs, p, cfg.bandwidth, solver_options(cfg), run.seed_for({1}));
      });
      if (rep.full_coherence) {
        run.note(name + " m=" + std::to_string(m) + ": full coherence detected, solve skipped");
      }
      csv += name + "," + std::to_string(m) + "," + std::to_string(p.size()) + "," + fmt(rep.mu) + "," +
             (rep.full_coherence ? "1" : "0") + "," + fmt(rep.coefficient_error) + "," +
             fmt(rep.resynthesis_error) + "," + (rep.result.converged ? "1" : "0") + "\n";
    }
  }
  run.write("forward.csv", csv_document(csv));
}

}  // namespace

std::string csv_document(const std::string& body) {
  const auto nl = body.find('\n');
  return "# schema: " + body.substr(0, nl) + "\n" + body;
}

std::string ExperimentSummary::text() const {
  std::ostringstream out;
  out << "experiment: " << to_string(kind) << '\n';
  double total = 0.0;
  for (const auto& s : stages) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s.seconds);
    out << "stage " << s.name << ": " << buf << " s\n";
    total += s.seconds;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", total);
  out << "total: " << buf << " s\n";
  for (const auto& n : notes) out << "note: " << n << '\n';
  for (const auto& f : files) out << "wrote: " << f.filename().string() << '\n';
  return out.str();
}

ExperimentSummary run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  const bool created = !fs::exists(out_dir);
  fs::create_directories(out_dir);
  Run run(config, out_dir);
  try {
    switch (config.kind) {
      case ExperimentKind::CoherenceCompare: coherence_compare(run); break;
      case ExperimentKind::OptimizePattern: optimize_pattern(run); break;
      case ExperimentKind::PhaseTransition: phase_transition_run(run); break;
      case ExperimentKind::IgrfDemo: igrf_demo(run); break;
      case ExperimentKind::WignerForwardDemo: wigner_forward(run); break;
    }
    write_file_atomic(out_dir / "config.txt", format_config(config));
    run.summary().files.push_back(out_dir / "config.txt");
    write_file_atomic(out_dir / "summary.txt", run.summary().text());
  } catch (...) {
    std::error_code ec;
    for (const auto& f : run.summary().files) fs::remove(f, ec);
    if (created) fs::remove(out_dir, ec);  // only succeeds when empty
    throw;
  }
  return run.summary();
}

}  // namespace spherecs
