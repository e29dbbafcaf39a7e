#include "spherecs/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "spherecs/coherence.hpp"
#include "spherecs/error.hpp"
#include "spherecs/rng.hpp"
#include "spherecs/sensing.hpp"

namespace spherecs {
namespace {

constexpr std::size_t kHotPairs = 8;
constexpr int kRebuildEvery = 64;

}  // namespace

void OptimizerConfig::validate() const {
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw InvalidArgument("optimizer: initial_step must be positive");
  }
  if (!(decay > 0.0 && decay < 1.0)) throw InvalidArgument("optimizer: decay must lie in (0, 1)");
  if (max_iterations < 0) throw InvalidArgument("optimizer: max_iterations must be >= 0");
  if (!(tolerance > 0.0)) throw InvalidArgument("optimizer: tolerance must be positive");
  if (!(min_step >= 0.0)) throw InvalidArgument("optimizer: min_step must be >= 0");
  if (restarts < 1) throw InvalidArgument("optimizer: restarts must be >= 1");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIterations: return "k_max";
    case StopReason::StepFloor: return "step_floor";
  }
  return "unknown";
}

CoherenceObjective::CoherenceObjective(std::span<const double> thetas, Domain domain, int bandwidth)
    : domain_(domain), m_(thetas.size()), span_(2 * (bandwidth - 1)) {
  if (m_ < 1) throw InvalidArgument("objective: need at least one elevation");
  if (bandwidth < 2) throw InvalidArgument("objective: need bandwidth >= 2");
  const BasisEnumeration basis(domain, bandwidth);
  const std::size_t n = basis.size();

  // Real elevation factor of every column; the free angles only contribute a phase.
  std::vector<double> c(n * m_);
  std::vector<double> norms(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < m_; ++p) {
      const double v = basis_value(domain, basis[q], {thetas[p], 0.0, 0.0}).real();
      c[q * m_ + p] = v;
      norms[q] += v * v;
    }
    norms[q] = std::sqrt(norms[q]);
    if (norms[q] == 0.0) {
      throw ZeroNormError("objective: column " + std::to_string(q) + " vanishes on the elevations");
    }
  }

  const int width_n = domain == Domain::S2 ? 1 : 2 * span_ + 1;
  const int offset_n = domain == Domain::S2 ? 0 : span_;
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t r = q + 1; r < n; ++r) {
      const int dk = basis[r].k - basis[q].k;
      const int dn = basis[r].n - basis[q].n;
      if (dk == 0 && dn == 0) {
        double dot = 0.0;
        for (std::size_t p = 0; p < m_; ++p) dot += c[q * m_ + p] * c[r * m_ + p];
        floor_ = std::max(floor_, std::abs(dot) / (norms[q] * norms[r]));
        continue;
      }
      pairs_.push_back({static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(r),
                        static_cast<std::uint32_t>((dk + span_) * width_n + dn + offset_n)});
    }
  }
  const std::size_t np = pairs_.size();
  weights_.resize(m_ * np);
  for (std::size_t p = 0; p < m_; ++p) {
    for (std::size_t i = 0; i < np; ++i) {
      const auto& pr = pairs_[i];
      weights_[p * np + i] = c[pr.q * m_ + p] * c[pr.r * m_ + p] / (norms[pr.q] * norms[pr.r]);
    }
  }
  gram_.assign(np, 0.0);
  angles_.assign(num_angles(), 0.0);
  rebuild();
}

// conj(a_q) a_r carries exp(i s (dk phi + dn chi)) with s = +1 for Y and -1 for D.
void CoherenceObjective::phase_table(std::size_t, double phi, double chi,
                                     std::vector<std::complex<double>>& out) const {
  const double s = domain_ == Domain::S2 ? 1.0 : -1.0;
  const int w = 2 * span_ + 1;
  if (domain_ == Domain::S2) {
    out.resize(w);
    for (int dk = -span_; dk <= span_; ++dk) out[dk + span_] = std::polar(1.0, s * dk * phi);
    return;
  }
  out.resize(static_cast<std::size_t>(w) * w);
  std::vector<std::complex<double>> ek(w);
  std::vector<std::complex<double>> en(w);
  for (int d = -span_; d <= span_; ++d) {
    ek[d + span_] = std::polar(1.0, s * d * phi);
    en[d + span_] = std::polar(1.0, s * d * chi);
  }
  for (int a = 0; a < w; ++a) {
    for (int b = 0; b < w; ++b) out[a * w + b] = ek[a] * en[b];
  }
}

void CoherenceObjective::set_angles(std::span<const double> angles) {
  if (angles.size() != num_angles()) {
    throw InvalidArgument("objective: expected " + std::to_string(num_angles()) + " angles, got " +
                          std::to_string(angles.size()));
  }
  for (std::size_t j = 0; j < angles.size(); ++j) angles_[j] = wrap_angle(angles[j]);
  rebuild();
}

void CoherenceObjective::rebuild() {
  const std::size_t np = pairs_.size();
  std::fill(gram_.begin(), gram_.end(), std::complex<double>(0.0));
  std::vector<std::complex<double>> table;
  for (std::size_t p = 0; p < m_; ++p) {
    const double chi = domain_ == Domain::SO3 ? angles_[m_ + p] : 0.0;
    phase_table(p, angles_[p], chi, table);
    const double* w = weights_.data() + p * np;
    for (std::size_t i = 0; i < np; ++i) gram_[i] += w[i] * table[pairs_[i].table];
  }
  double best = 0.0;
  for (const auto& g : gram_) best = std::max(best, std::norm(g));
  var_max_ = std::sqrt(best);
}

double CoherenceObjective::probe(std::size_t j, double angle, double cutoff) const {
  if (j >= num_angles()) throw InvalidArgument("objective: coordinate out of range");
  if (floor_ >= cutoff) return std::numeric_limits<double>::infinity();
  const std::size_t p = j % m_;
  const bool is_chi = j >= m_;
  const double phi = angles_[p];
  const double chi = domain_ == Domain::SO3 ? angles_[m_ + p] : 0.0;
  std::vector<std::complex<double>> before;
  std::vector<std::complex<double>> after;
  phase_table(p, phi, chi, before);
  phase_table(p, is_chi ? phi : angle, is_chi ? angle : chi, after);
  for (std::size_t t = 0; t < after.size(); ++t) after[t] -= before[t];

  const std::size_t np = pairs_.size();
  const double* w = weights_.data() + p * np;
  const double limit = cutoff * cutoff;
  for (std::uint32_t i : hot_) {
    if (std::norm(gram_[i] + w[i] * after[pairs_[i].table]) >= limit) {
      return std::numeric_limits<double>::infinity();
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    const double v = std::norm(gram_[i] + w[i] * after[pairs_[i].table]);
    if (v >= limit) {
      hot_.insert(hot_.begin(), static_cast<std::uint32_t>(i));
      if (hot_.size() > kHotPairs) hot_.pop_back();
      return std::numeric_limits<double>::infinity();
    }
    best = std::max(best, v);
  }
  return std::max(floor_, std::sqrt(best));
}

void CoherenceObjective::commit(std::size_t j, double angle) {
  if (j >= num_angles()) throw InvalidArgument("objective: coordinate out of range");
  const std::size_t p = j % m_;
  const double phi = angles_[p];
  const double chi = domain_ == Domain::SO3 ? angles_[m_ + p] : 0.0;
  std::vector<std::complex<double>> before;
  std::vector<std::complex<double>> after;
  phase_table(p, phi, chi, before);
  angles_[j] = wrap_angle(angle);
  phase_table(p, angles_[p], domain_ == Domain::SO3 ? angles_[m_ + p] : 0.0, after);
  for (std::size_t t = 0; t < after.size(); ++t) after[t] -= before[t];
  const std::size_t np = pairs_.size();
  const double* w = weights_.data() + p * np;
  double best = 0.0;
  for (std::size_t i = 0; i < np; ++i) {
    gram_[i] += w[i] * after[pairs_[i].table];
    best = std::max(best, std::norm(gram_[i]));
  }
  var_max_ = std::sqrt(best);
}

double evaluate_candidate(std::span<const double> thetas, std::span<const double> angles,
                          Domain domain, int bandwidth) {
  const std::size_t m = thetas.size();
  const std::size_t expected = domain == Domain::S2 ? m : 2 * m;
  if (angles.size() != expected) {
    throw InvalidArgument("evaluate_candidate: expected " + std::to_string(expected) +
                          " angles, got " + std::to_string(angles.size()));
  }
  std::vector<SamplePoint> pts(m);
  for (std::size_t p = 0; p < m; ++p) {
    pts[p] = {thetas[p], wrap_angle(angles[p]), domain == Domain::SO3 ? wrap_angle(angles[m + p]) : 0.0};
  }
  const SensingMatrix a = build_matrix(SamplingPattern(domain, std::move(pts)), bandwidth);
  return coherence_of(a.entries).mu;
}

OptimizerTrace pattern_search(std::span<const double> thetas, Domain domain, int bandwidth,
                              const OptimizerConfig& config) {
  config.validate();
  const std::size_t m = thetas.size();
  if (m < 2) throw InvalidArgument("pattern_search: need at least two elevations");

  CoherenceObjective objective(thetas, domain, bandwidth);
  Rng rng(config.seed);
  std::vector<double> start(objective.num_angles());
  for (double& a : start) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  objective.set_angles(start);

  OptimizerTrace trace;
  trace.seed = config.seed;
  trace.lower_bound = elevation_lower_bound(thetas, bandwidth, domain).value;
  trace.initial_mu = objective.value();

  double mu = objective.value();
  double step = config.initial_step;
  int commits = 0;
  for (int iter = 1;; ++iter) {
    if (mu - trace.lower_bound <= config.tolerance) {
      trace.stop = StopReason::Tolerance;
      break;
    }
    if (iter > config.max_iterations) {
      trace.stop = StopReason::MaxIterations;
      break;
    }
    if (step < config.min_step) {
      trace.stop = StopReason::StepFloor;
      break;
    }
    bool accepted = false;
    const double used = step;
    for (std::size_t j = 0; j < objective.num_angles() && !accepted; ++j) {
      for (double sign : {1.0, -1.0}) {
        const double candidate = wrap_angle(objective.angles()[j] + sign * step);
        ++trace.evaluations;
        if (objective.probe(j, candidate, mu) < mu) {
          objective.commit(j, candidate);
          if (++commits % kRebuildEvery == 0) objective.rebuild();
          // A commit may land a hair above the probed value through rounding; never
          // let the recorded sequence increase.
          mu = std::min(mu, objective.value());
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) step *= config.decay;
    trace.records.push_back({iter, mu, used, accepted});
  }

  objective.rebuild();
  const auto& ang = objective.angles();
  std::vector<SamplePoint> pts(m);
  for (std::size_t p = 0; p < m; ++p) {
    pts[p] = {thetas[p], ang[p], domain == Domain::SO3 ? ang[m + p] : 0.0};
  }
  Provenance prov;
  prov.generator = "pattern-search";
  prov.seed = config.seed;
  prov.set_param("B", std::to_string(bandwidth));
  prov.set_param("stop", std::string(to_string(trace.stop)));
  trace.pattern = SamplingPattern(domain, std::move(pts), std::move(prov));
  trace.mu = objective.value();
  return trace;
}

OptimizerTrace multistart_search(std::span<const double> thetas, Domain domain, int bandwidth,
                                 const OptimizerConfig& config) {
  config.validate();
  OptimizerTrace best;
  bool have = false;
  std::size_t evaluations = 0;
  for (int r = 0; r < config.restarts; ++r) {
    OptimizerConfig run = config;
    run.seed = Rng::derive(config.seed, {static_cast<std::uint64_t>(r)});
    OptimizerTrace trace = pattern_search(thetas, domain, bandwidth, run);
    evaluations += trace.evaluations;
    if (!have || trace.mu < best.mu) {
      best = std::move(trace);
      have = true;
    }
    if (best.stop == StopReason::Tolerance) break;
  }
  best.evaluations = evaluations;
  return best;
}

std::string trace_csv(const OptimizerTrace& trace) {
  std::string out = "iter,mu,delta,accepted\n";
  char buf[128];
  for (const auto& rec : trace.records) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d\n", rec.iteration, rec.mu, rec.step,
                  rec.accepted ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace spherecs
