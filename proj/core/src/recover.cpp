#include "spherecs/recover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spherecs/error.hpp"
#include "spherecs/rng.hpp"

namespace spherecs {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

VectorXcd soft_threshold(const VectorXcd& v, double t) {
  VectorXcd out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    out(i) = mag > t ? v(i) * ((mag - t) / mag) : std::complex<double>(0.0);
  }
  return out;
}

double inf_norm(const VectorXcd& v) {
  double best = 0.0;
  for (Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  return best;
}

std::vector<std::size_t> support_of(const VectorXcd& z, double rel) {
  std::vector<std::size_t> s;
  const double cut = rel * inf_norm(z);
  for (Index i = 0; i < z.size(); ++i) {
    if (std::abs(z(i)) > cut && z(i) != 0.0) s.push_back(static_cast<std::size_t>(i));
  }
  return s;
}

// Scaled problem plus the pieces needed to certify a primal/dual pair.
struct Certifier {
  const MatrixXcd& a;
  const VectorXcd& y;
  double eta;
  double feas;
  Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod;

  VectorXcd ball(const VectorXcd& v) const {
    const VectorXcd d = v - y;
    const double nd = d.norm();
    if (nd <= eta) return v;
    return y + d * (eta / nd);
  }

  // Smallest correction that moves A x onto the constraint ball. Empty when A x cannot
  // reach it (rank-deficient rows).
  bool make_feasible(VectorXcd& x) const {
    const VectorXcd ax = a * x;
    const VectorXcd target = ball(ax);
    if ((ax - target).norm() > 0.0) x += cod.solve(target - ax);
    return (a * x - y).norm() <= eta + feas;
  }

  double dual_value(VectorXcd nu) const {
    const double c = inf_norm(a.adjoint() * nu);
    if (c == 0.0) return 0.0;
    if (c > 1.0) nu /= c;
    return (y.adjoint() * nu)(0).real() - eta * nu.norm();
  }
};

}  // namespace

void RecoveryProblem::validate() const {
  if (a.rows() < 1 || a.cols() < 1) throw InvalidArgument("recovery: empty sensing matrix");
  if (y.size() != a.rows()) {
    throw InvalidArgument("recovery: measurement length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(a.rows()) + " rows");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgument("recovery: eta must be finite and >= 0");
}

double l1_norm(const VectorXcd& x) {
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::abs(x(i));
  return s;
}

RecoveryResult qcbp_solve(const RecoveryProblem& problem, const QcbpOptions& options) {
  problem.validate();
  if (options.max_iterations < 1 || options.check_every < 1) {
    throw InvalidArgument("qcbp: iteration counts must be positive");
  }
  const Index m = problem.a.rows();
  const Index n = problem.a.cols();
  const double ynorm = problem.y.norm();

  RecoveryResult out;
  auto finish = [&](VectorXcd z) {
    out.residual = (problem.a * z - problem.y).norm();
    out.objective = l1_norm(z);
    out.support = support_of(z, options.support_tol);
    out.z = std::move(z);
    return out;
  };
  if (ynorm <= problem.eta) {
    out.converged = true;
    return finish(VectorXcd::Zero(n));
  }

  Eigen::BDCSVD<MatrixXcd> svd(problem.a);
  const double scale = svd.singularValues()(0);
  if (scale == 0.0) throw InfeasibleProblem("qcbp: zero sensing matrix cannot reach y");
  // Unit spectral norm and unit ||y||, so the penalty adaptation below sees O(1) residuals.
  const double unit = ynorm / scale;
  const MatrixXcd a = problem.a / scale;
  const VectorXcd y = problem.y / (scale * unit);
  const double eta = problem.eta / (scale * unit);
  const double feas = options.feas_tol * std::max(1.0, ynorm) / (scale * unit);

  Certifier cert{a, y, eta, feas, Eigen::CompleteOrthogonalDecomposition<MatrixXcd>(a)};
  {
    const VectorXcd ls = cert.cod.solve(y);
    const double r = (a * ls - y).norm();
    if (r > eta + feas) {
      throw InfeasibleProblem("qcbp: least-squares residual " + std::to_string(r * scale * unit) +
                              " exceeds eta " + std::to_string(problem.eta));
    }
  }
  const Eigen::LLT<MatrixXcd> llt(MatrixXcd::Identity(m, m) + a * a.adjoint());

  VectorXcd best_primal;
  double best_value = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();
  auto offer_primal = [&](VectorXcd x) {
    if (!cert.make_feasible(x)) return;
    const double v = l1_norm(x);
    if (v < best_value) {
      best_value = v;
      best_primal = std::move(x);
    }
  };
  auto certified = [&] {
    return best_primal.size() > 0 &&
           best_value - best_dual <= options.gap_tol * std::max(1.0, best_value);
  };

  // Least squares on the active set, certified by the minimum-norm dual that matches the
  // signs there.
  auto polish = [&](const VectorXcd& z) {
    const auto s = support_of(z, options.support_tol);
    if (s.empty() || static_cast<Index>(s.size()) > m) return;
    MatrixXcd as(m, static_cast<Index>(s.size()));
    for (std::size_t j = 0; j < s.size(); ++j) as.col(static_cast<Index>(j)) = a.col(static_cast<Index>(s[j]));
    Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cs(as);
    if (cs.rank() < as.cols()) return;
    const VectorXcd xs = cs.solve(y);
    VectorXcd sign(xs.size());
    for (Index j = 0; j < xs.size(); ++j) {
      const double mag = std::abs(xs(j));
      if (mag == 0.0) return;
      sign(j) = xs(j) / mag;
    }
    VectorXcd x = VectorXcd::Zero(n);
    for (std::size_t j = 0; j < s.size(); ++j) x(static_cast<Index>(s[j])) = xs(static_cast<Index>(j));
    offer_primal(x);
    const MatrixXcd ash = as.adjoint();
    const VectorXcd nu = Eigen::CompleteOrthogonalDecomposition<MatrixXcd>(ash).solve(sign);
    best_dual = std::max(best_dual, cert.dual_value(nu));
  };

  double rho = 10.0 / std::max(inf_norm(a.adjoint() * y), 1e-300);
  VectorXcd x = VectorXcd::Zero(n);
  VectorXcd z = VectorXcd::Zero(n);
  VectorXcd u = VectorXcd::Zero(n);
  VectorXcd w = cert.ball(VectorXcd::Zero(m));
  VectorXcd v = VectorXcd::Zero(m);

  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    const VectorXcd rhs = (z - u) + a.adjoint() * (w - v);
    x = rhs - a.adjoint() * llt.solve(a * rhs);
    const VectorXcd z_old = z;
    z = soft_threshold(x + u, 1.0 / rho);
    const VectorXcd ax = a * x;
    const VectorXcd w_old = w;
    w = cert.ball(ax + v);
    u += x - z;
    v += ax - w;

    if (it % options.check_every != 0) continue;
    offer_primal(z);
    best_dual = std::max(best_dual, cert.dual_value(-rho * v));
    if (options.polish && eta == 0.0 && it % (5 * options.check_every) == 0) polish(z);
    if (certified()) break;

    const double r_primal = std::sqrt((x - z).squaredNorm() + (ax - w).squaredNorm());
    const double r_dual =
        rho * std::sqrt((z - z_old).squaredNorm() + (a.adjoint() * (w - w_old)).squaredNorm());
    if (r_primal > 10.0 * r_dual) {
      rho *= 2.0;
      u /= 2.0;
      v /= 2.0;
    } else if (r_dual > 10.0 * r_primal) {
      rho /= 2.0;
      u *= 2.0;
      v *= 2.0;
    }
  }

  out.iterations = it;
  out.converged = certified();
  out.dual_bound = std::max(best_dual, 0.0) * unit;
  if (best_primal.size() == 0) {
    best_primal = z;
    cert.make_feasible(best_primal);
  }
  return finish(best_primal * unit);
}

RecoveryResult omp_solve(const MatrixXcd& a, const VectorXcd& y, std::size_t s, double eta) {
  if (y.size() != a.rows()) throw InvalidArgument("omp: measurement length does not match rows");
  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (s > std::min(m, n)) {
    throw InvalidArgument("omp: sparsity " + std::to_string(s) + " exceeds min(m, N)");
  }
  Eigen::VectorXd norms = a.colwise().norm().transpose();

  RecoveryResult out;
  out.z = VectorXcd::Zero(static_cast<Index>(n));
  VectorXcd r = y;
  const double stop = std::max(eta, 1e-12 * y.norm());
  std::vector<std::size_t> chosen;
  std::vector<char> used(n, 0);
  VectorXcd xs;
  while (chosen.size() < s && r.norm() > stop) {
    const VectorXcd corr = a.adjoint() * r;
    std::size_t pick = n;
    double best = -1.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (used[q] || norms(static_cast<Index>(q)) == 0.0) continue;
      const double c = std::abs(corr(static_cast<Index>(q))) / norms(static_cast<Index>(q));
      if (c > best) {
        best = c;
        pick = q;
      }
    }
    if (pick == n) break;
    chosen.push_back(pick);
    used[pick] = 1;
    MatrixXcd as(a.rows(), static_cast<Index>(chosen.size()));
    for (std::size_t j = 0; j < chosen.size(); ++j) as.col(static_cast<Index>(j)) = a.col(static_cast<Index>(chosen[j]));
    Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(as);
    if (cod.rank() < as.cols()) out.rank_deficient = true;
    xs = cod.solve(y);
    r = y - as * xs;
    ++out.iterations;
  }
  for (std::size_t j = 0; j < chosen.size(); ++j) out.z(static_cast<Index>(chosen[j])) = xs(static_cast<Index>(j));
  out.residual = (a * out.z - y).norm();
  out.objective = l1_norm(out.z);
  out.support = chosen;
  std::sort(out.support.begin(), out.support.end());
  out.converged = out.residual <= stop || chosen.size() == s;
  return out;
}

VectorXcd sparse_signal(const SparseSignalSpec& spec) {
  if (spec.s > spec.n) throw InvalidArgument("sparse_signal: s exceeds N");
  Rng rng(spec.seed);
  std::vector<std::size_t> idx(spec.n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first s slots become a uniform s-subset.
  for (std::size_t i = 0; i < spec.s; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(spec.n - i));
    std::swap(idx[i], idx[j]);
  }
  VectorXcd x = VectorXcd::Zero(static_cast<Index>(spec.n));
  const double half = std::sqrt(0.5);
  for (std::size_t i = 0; i < spec.s; ++i) {
    if (spec.distribution == SignalDistribution::ComplexGaussian) {
      const double re = rng.normal();
      const double im = rng.normal();
      x(static_cast<Index>(idx[i])) = {half * re, half * im};
    } else {
      x(static_cast<Index>(idx[i])) = rng.normal();
    }
  }
  return x;
}

double best_s_term_error(const VectorXcd& x, std::size_t s, double p) {
  if (!(p > 0.0)) throw InvalidArgument("best_s_term_error: p must be positive");
  std::vector<double> mags(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(x(i));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double acc = 0.0;
  for (std::size_t i = s; i < mags.size(); ++i) acc += std::pow(mags[i], p);
  return std::pow(acc, 1.0 / p);
}

double relative_error(const VectorXcd& z, const VectorXcd& g) {
  if (z.size() != g.size()) throw InvalidArgument("relative_error: length mismatch");
  const double gn = g.norm();
  return gn == 0.0 ? z.norm() : (z - g).norm() / gn;
}

}  // namespace spherecs
