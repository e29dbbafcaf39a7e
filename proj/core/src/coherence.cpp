#include "spherecs/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "spherecs/error.hpp"
#include "spherecs/parallel.hpp"

namespace spherecs {
namespace {

double row_weight(std::span<const double> weights, std::size_t p) {
  return weights.empty() ? 1.0 : weights[p];
}

void check_weights(std::span<const double> thetas, std::span<const double> weights) {
  if (thetas.empty()) throw InvalidArgument("elevation bound: empty elevation list");
  if (!weights.empty() && weights.size() != thetas.size()) {
    throw InvalidArgument("elevation bound: weight count differs from elevation count");
  }
}

// Normalized |<u, v>| over a family of real vectors sharing the same orders.
struct PairMax {
  double value = -1.0;
  int l = 0;
  int r = 0;
};

PairMax max_normalized_pair(const std::vector<std::vector<double>>& vecs, int first_degree) {
  std::vector<double> norms(vecs.size());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    double s = 0.0;
    for (double x : vecs[i]) s += x * x;
    norms[i] = std::sqrt(s);
    if (norms[i] == 0.0) {
      throw ZeroNormError("elevation bound: basis vector of degree " +
                          std::to_string(first_degree + static_cast<int>(i)) +
                          " vanishes on every elevation");
    }
  }
  PairMax best;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (std::size_t j = i + 1; j < vecs.size(); ++j) {
      double dot = 0.0;
      for (std::size_t p = 0; p < vecs[i].size(); ++p) dot += vecs[i][p] * vecs[j][p];
      const double ratio = std::abs(dot) / (norms[i] * norms[j]);
      if (ratio > best.value) {
        best.value = ratio;
        best.l = first_degree + static_cast<int>(i);
        best.r = first_degree + static_cast<int>(j);
      }
    }
  }
  return best;
}

// Angle reduced to (-pi, pi].
double centered(double angle) {
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

CoherenceValue coherence_of(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.cols();
  if (n < 2) throw InvalidArgument("coherence: need at least two columns");
  if (a.rows() < 1) throw InvalidArgument("coherence: need at least one row");

  const Eigen::MatrixXcd gram = a.adjoint() * a;
  Eigen::VectorXd norms(n);
  for (Eigen::Index q = 0; q < n; ++q) {
    norms(q) = std::sqrt(std::max(0.0, gram(q, q).real()));
    if (norms(q) == 0.0) {
      throw ZeroNormError("coherence: column " + std::to_string(q) + " is identically zero");
    }
  }

  // Column blocks scanned independently, merged in index order so ties resolve the same way
  // regardless of the thread count.
  const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(n), 64);
  std::vector<CoherenceValue> partial(blocks, CoherenceValue{-1.0, 0, 0});
  parallel_for(blocks, [&](std::size_t b) {
    const Eigen::Index begin = static_cast<Eigen::Index>(static_cast<std::size_t>(n) * b / blocks);
    const Eigen::Index end = static_cast<Eigen::Index>(static_cast<std::size_t>(n) * (b + 1) / blocks);
    CoherenceValue best{-1.0, 0, 0};
    for (Eigen::Index q = begin; q < end; ++q) {
      for (Eigen::Index r = q + 1; r < n; ++r) {
        const double v = std::abs(gram(q, r)) / (norms(q) * norms(r));
        if (v > best.mu) best = {v, static_cast<std::size_t>(q), static_cast<std::size_t>(r)};
      }
    }
    partial[b] = best;
  });
  CoherenceValue best{-1.0, 0, 0};
  for (const auto& c : partial) {
    if (c.mu > best.mu) best = c;
  }
  return best;
}

ElevationBound elevation_lower_bound(std::span<const double> thetas, int bandwidth, Domain domain,
                                     std::span<const double> weights) {
  check_weights(thetas, weights);
  if (bandwidth < 2) throw InvalidArgument("elevation bound: need bandwidth >= 2");
  const std::size_t m = thetas.size();

  ElevationBound out;
  out.value = -1.0;
  auto consider = [&](const PairMax& pm, int k, int n) {
    if (pm.value > out.value) {
      out.value = pm.value;
      out.first = {pm.l, k, n};
      out.second_degree = pm.r;
    }
  };

  if (domain == Domain::S2) {
    for (int k = 0; k < bandwidth - 1; ++k) {
      std::vector<std::vector<double>> vecs;
      for (int l = k; l < bandwidth; ++l) {
        std::vector<double> v(m);
        for (std::size_t p = 0; p < m; ++p) {
          v[p] = row_weight(weights, p) * assoc_legendre_normalized(l, k, std::cos(thetas[p]));
        }
        vecs.push_back(std::move(v));
      }
      consider(max_normalized_pair(vecs, k), k, 0);
    }
  } else {
    for (int k = -(bandwidth - 2); k <= bandwidth - 2; ++k) {
      for (int n = -(bandwidth - 2); n <= bandwidth - 2; ++n) {
        const int lmin = std::max(std::abs(k), std::abs(n));
        std::vector<std::vector<double>> vecs;
        for (int l = lmin; l < bandwidth; ++l) {
          std::vector<double> v(m);
          for (std::size_t p = 0; p < m; ++p) {
            v[p] = row_weight(weights, p) * wigner_d({l, k, n}, thetas[p]);
          }
          vecs.push_back(std::move(v));
        }
        consider(max_normalized_pair(vecs, lmin), k, n);
      }
    }
  }
  out.legendre_pair = bandwidth >= 3 ? legendre_pair_bound(thetas, bandwidth, weights)
                                     : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double legendre_pair_bound(std::span<const double> thetas, int bandwidth,
                           std::span<const double> weights) {
  check_weights(thetas, weights);
  if (bandwidth < 3) throw InvalidArgument("legendre_pair_bound: need bandwidth >= 3");
  std::vector<std::vector<double>> vecs(2, std::vector<double>(thetas.size()));
  for (std::size_t p = 0; p < thetas.size(); ++p) {
    const double x = std::cos(thetas[p]);
    const double w = row_weight(weights, p);
    vecs[0][p] = w * assoc_legendre_normalized(bandwidth - 1, 0, x);
    vecs[1][p] = w * assoc_legendre_normalized(bandwidth - 3, 0, x);
  }
  return max_normalized_pair(vecs, 0).value;
}

double welch_bound(std::size_t m, std::size_t n) {
  if (m < 1 || n < 2) throw InvalidArgument("welch_bound: need m >= 1 and N >= 2");
  if (m >= n) return 0.0;
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return std::sqrt((nd - md) / (md * (nd - 1.0)));
}

CoherenceReport mutual_coherence(const SensingMatrix& a) {
  CoherenceReport report;
  const auto start = std::chrono::steady_clock::now();
  const CoherenceValue c = coherence_of(a.entries);
  report.gram_time = std::chrono::steady_clock::now() - start;
  report.mu = c.mu;
  report.q = c.q;
  report.r = c.r;
  report.welch_bound = welch_bound(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));

  const int bandwidth = a.enumeration.bandwidth();
  const auto thetas = a.pattern.thetas();
  std::vector<double> weights;
  if (a.preconditioned()) {
    for (double t : thetas) weights.push_back(precondition_weight(a.preconditioner, t));
  }
  if (bandwidth >= 2) {
    try {
      const ElevationBound eb = elevation_lower_bound(thetas, bandwidth, a.pattern.domain(), weights);
      report.elevation_lower_bound = eb.value;
      report.legendre_pair_bound = eb.legendre_pair;
    } catch (const ZeroNormError&) {
      // Unreachable when coherence_of succeeded; keep the bound at its trivial value.
      report.elevation_lower_bound = 0.0;
    }
  }
  return report;
}

std::string coherence_csv_header() { return "m,N,B,domain,pattern,mu,q,r,lb_elev,welch"; }

std::string coherence_csv_row(const SensingMatrix& a, const CoherenceReport& report,
                              const std::string& pattern_name) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%lld,%lld,%d,%s,%s,%.17g,%zu,%zu,%.17g,%.17g",
                static_cast<long long>(a.rows()), static_cast<long long>(a.cols()),
                a.enumeration.bandwidth(), std::string(to_string(a.pattern.domain())).c_str(),
                pattern_name.c_str(), report.mu, report.q, report.r, report.elevation_lower_bound,
                report.welch_bound);
  return buf;
}

std::complex<double> gram_via_3j(const BasisIndex& first, const BasisIndex& second,
                                 const SamplingPattern& pattern) {
  if (!first.valid() || !second.valid()) throw InvalidArgument("gram_via_3j: invalid basis index");
  const bool s2 = pattern.domain() == Domain::S2;
  if (s2 && (first.n != 0 || second.n != 0)) {
    throw InvalidArgument("gram_via_3j: S2 indices must have n == 0");
  }
  const int l1 = first.l;
  const int l2 = second.l;
  const int k_hat = second.k - first.k;
  const int n_hat = second.n - first.n;
  const double four_pi = 4.0 * std::numbers::pi;
  const double eight_pi2 = 8.0 * std::numbers::pi * std::numbers::pi;

  std::complex<double> total = 0.0;
  for (int big_l = std::abs(l1 - l2); big_l <= l1 + l2; ++big_l) {
    if (std::abs(k_hat) > big_l || std::abs(n_hat) > big_l) continue;
    double coupling;
    if (s2) {
      coupling = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * big_l + 1.0) / four_pi) *
                 wigner3j(l1, l2, big_l, 0, 0, 0) * wigner3j(l1, l2, big_l, -first.k, second.k, -k_hat);
    } else {
      coupling = std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * big_l + 1.0) / eight_pi2) *
                 wigner3j(l1, l2, big_l, -first.n, second.n, -n_hat) *
                 wigner3j(l1, l2, big_l, -first.k, second.k, -k_hat);
    }
    if (coupling == 0.0) continue;
    std::complex<double> sum = 0.0;
    for (const auto& p : pattern.points()) {
      sum += s2 ? spherical_harmonic(big_l, k_hat, p.theta, p.phi)
                : wigner_D({big_l, k_hat, n_hat}, p.theta, p.phi, p.chi);
    }
    total += coupling * sum;
  }
  const int phase = s2 ? second.k : second.k + second.n;
  return (phase % 2 == 0) ? total : -total;
}

std::vector<OrderPair> detect_modular_symmetry(const SamplingPattern& pattern, int bandwidth,
                                               double tol) {
  std::vector<OrderPair> out;
  if (pattern.empty()) throw InvalidArgument("detect_modular_symmetry: empty pattern");
  const auto& pts = pattern.points();
  auto holds = [&](int k, int n) {
    for (const auto& p : pts) {
      const double diff = 2.0 * k * (p.phi - pts[0].phi) + 2.0 * n * (p.chi - pts[0].chi);
      if (std::abs(centered(diff)) > tol) return false;
    }
    return true;
  };
  const int top = bandwidth - 1;
  if (pattern.domain() == Domain::S2) {
    for (int k = 1; k <= top; ++k) {
      if (holds(k, 0)) out.push_back({k, 0});
    }
    return out;
  }
  for (int k = 0; k <= top; ++k) {
    for (int n = -top; n <= top; ++n) {
      if (k == 0 && n <= 0) continue;
      if (holds(k, n)) out.push_back({k, n});
    }
  }
  return out;
}

}  // namespace spherecs
