#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bp_oracle.hpp"
#include "spherecs/error.hpp"
#include "spherecs/patterns.hpp"
#include "spherecs/phase_transition.hpp"
#include "spherecs/recover.hpp"
#include "spherecs/rng.hpp"
#include "spherecs/sensing.hpp"

using namespace spherecs;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

Eigen::MatrixXd gaussian_matrix(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd a(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = rng.normal() / std::sqrt(double(m));
  return a;
}

std::vector<std::size_t> support_indices(const VectorXcd& x) {
  std::vector<std::size_t> s;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) s.push_back(std::size_t(i));
  return s;
}

}  // namespace

TEST_SUITE("recover") {

TEST_CASE("orthonormal columns recover exactly") {
  const int n = 12;
  Eigen::HouseholderQR<MatrixXcd> qr(MatrixXcd::Random(20, n));
  const MatrixXcd q = 3.0 * MatrixXcd(qr.householderQ() * MatrixXcd::Identity(20, n));
  const auto g = sparse_signal({n, 3, SignalDistribution::ComplexGaussian, 4});
  const auto r = qcbp_solve({q, q * g, 0.0});
  CHECK(r.converged);
  CHECK((r.z - g).norm() < 1e-6);
  CHECK(r.support == support_indices(g));
  CHECK(r.dual_bound <= r.objective + 1e-9);
}

TEST_CASE("basis pursuit matches exhaustive enumeration") {
  const int m = 8, n = 20;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Eigen::MatrixXd a = gaussian_matrix(m, n, seed);
    const auto g = sparse_signal({std::size_t(n), 2, SignalDistribution::RealGaussian, seed + 100});
    const Eigen::VectorXd y = a * g.real();
    const auto oracle = testsupport::exhaustive_bp(a, y);
    const auto r = qcbp_solve({a.cast<std::complex<double>>(), y.cast<std::complex<double>>(), 0.0});
    CHECK(r.converged);
    CHECK(r.residual <= 1e-8 * std::max(1.0, y.norm()));
    CHECK(std::abs(r.objective - oracle.optimum) < 1e-8);
    CHECK(r.dual_bound <= oracle.optimum + 1e-8);
  }
}

TEST_CASE("qcbp is invariant to the scale of y") {
  const auto pat = random_pattern(RandomMeasure::Uniform, 40, Domain::S2, 11);
  const auto a = build_matrix(pat, 9);
  const auto g = sparse_signal({81, 8, SignalDistribution::ComplexGaussian, 12});
  for (double c : {1e-6, 1.0, 1e4, 1e8}) {
    CAPTURE(c);
    const VectorXcd t = g * c;
    const auto r = qcbp_solve({a.entries, a.entries * t, 0.0});
    CHECK(r.converged);
    CHECK((r.z - t).norm() <= 1e-9 * t.norm());
    CHECK(r.iterations < 5000);
  }
}

TEST_CASE("noisy constraint stays feasible and certified") {
  const auto pat = random_pattern(RandomMeasure::Uniform, 40, Domain::S2, 3);
  const auto a = build_matrix(pat, 7, true);
  const auto g = sparse_signal({49, 5, SignalDistribution::ComplexGaussian, 6});
  VectorXcd y = a.entries * g;
  Rng rng(1);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += std::complex<double>(rng.normal(), rng.normal()) * 1e-3;
  const double eta = 0.05;
  const auto r = qcbp_solve({a.entries, y, eta});
  CHECK(r.converged);
  CHECK(r.residual <= eta + 1e-8 * std::max(1.0, y.norm()));
  CHECK(r.objective - r.dual_bound <= 1e-9 * std::max(1.0, r.objective) + 1e-12);
}

TEST_CASE("trivial and invalid problems") {
  const MatrixXcd a = MatrixXcd::Random(4, 6);
  VectorXcd y = VectorXcd::Zero(4);
  const auto r = qcbp_solve({a, y, 0.0});
  CHECK(r.converged);
  CHECK(r.z.isZero());
  CHECK(r.iterations == 0);
  CHECK_THROWS_AS(qcbp_solve({a, VectorXcd::Zero(3), 0.0}), InvalidArgument);
  CHECK_THROWS_AS(qcbp_solve({a, y, -1.0}), InvalidArgument);

  MatrixXcd rank1(3, 2);
  rank1 << 1, 2, 1, 2, 1, 2;
  VectorXcd off(3);
  off << 1, 0, 0;
  CHECK_THROWS_AS(qcbp_solve({rank1, off, 0.0}), InfeasibleProblem);
  CHECK_NOTHROW(qcbp_solve({rank1, off, 1.0}));
}

TEST_CASE("omp") {
  const Eigen::MatrixXd ar = gaussian_matrix(10, 30, 3);
  const MatrixXcd a = ar.cast<std::complex<double>>();
  const auto r = omp_solve(a, a.col(7), 3);
  REQUIRE(r.support.size() == 1);
  CHECK(r.support[0] == 7);
  CHECK(r.iterations == 1);
  CHECK(r.residual < 1e-12);

  // every noiseless 1-sparse signal of an incoherent matrix is found
  for (Eigen::Index q = 0; q < a.cols(); ++q) {
    const VectorXcd y = std::complex<double>(0.3, -1.2) * a.col(q);
    const auto one = omp_solve(a, y, 1);
    REQUIRE(one.support.size() == 1);
    CHECK(one.support[0] == std::size_t(q));
    CHECK(std::abs(one.z(q) - std::complex<double>(0.3, -1.2)) < 1e-12);
  }

  const auto g = sparse_signal({30, 3, SignalDistribution::ComplexGaussian, 12});
  const auto rs = omp_solve(a, a * g, 10, 1e-10);
  CHECK(relative_error(rs.z, g) < 1e-10);
  CHECK_THROWS_AS(omp_solve(a, a * g, 11), InvalidArgument);
  CHECK_THROWS_AS(omp_solve(a, VectorXcd::Zero(3), 1), InvalidArgument);
}

TEST_CASE("omp stops once the residual vanishes") {
  MatrixXcd b(2, 3);
  b << 1, 1, 0,
       0, 0, 1;
  VectorXcd y(2);
  y << 0.5, 0.0;
  const auto r = omp_solve(b, y, 2);
  CHECK(r.iterations == 1);
  CHECK(r.residual < 1e-12);
  CHECK_FALSE(r.rank_deficient);
}

TEST_CASE("sparse signal utilities") {
  const auto g = sparse_signal({50, 7, SignalDistribution::ComplexGaussian, 3});
  CHECK(support_indices(g).size() == 7);
  CHECK(best_s_term_error(g, 7) == 0.0);
  CHECK(best_s_term_error(g, 6) > 0.0);
  CHECK(sparse_signal({50, 7, SignalDistribution::ComplexGaussian, 3}) == g);
  CHECK(sparse_signal({10, 0, SignalDistribution::RealGaussian, 3}).isZero());
  const auto real = sparse_signal({20, 5, SignalDistribution::RealGaussian, 1});
  CHECK(real.imag().isZero());
  CHECK_THROWS_AS(sparse_signal({5, 6, SignalDistribution::RealGaussian, 1}), InvalidArgument);

  VectorXcd x(4);
  x << 3.0, std::complex<double>(0, -1), 0.5, 2.0;
  CHECK(best_s_term_error(x, 2) == doctest::Approx(1.5));
  CHECK(best_s_term_error(x, 2, 2.0) == doctest::Approx(std::sqrt(1.25)));
  CHECK(l1_norm(x) == doctest::Approx(6.5));
  CHECK(relative_error(x, x) == 0.0);
  CHECK(relative_error(x, VectorXcd::Zero(4)) == doctest::Approx(x.norm()));

  // complex entries have E|x|^2 = 1
  const auto big = sparse_signal({40000, 40000, SignalDistribution::ComplexGaussian, 9});
  CHECK(big.squaredNorm() / 40000.0 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("recovery error scales linearly with bounded noise") {
  const int b = 4;
  const std::size_t n = basis_dimension(Domain::SO3, b);
  const std::size_t s = 3;
  const int m = int(std::ceil(4.0 * s * std::log(double(n))));
  std::vector<double> medians;
  for (double eps : {1e-4, 1e-3, 1e-2}) {
    std::vector<double> errs;
    for (std::uint64_t t = 0; t < 9; ++t) {
      const auto pat = random_pattern(RandomMeasure::Uniform, m, Domain::SO3, Rng::derive(5, {t}));
      const auto a = build_matrix(pat, b, true);
      const auto g = sparse_signal({n, s, SignalDistribution::ComplexGaussian, Rng::derive(6, {t})});
      Rng rng(Rng::derive(7, {t}));
      VectorXcd e(m);
      for (auto& v : e) v = std::polar(eps * std::sqrt(rng.uniform()), rng.uniform(0.0, 2 * std::numbers::pi));
      const VectorXcd noise = precondition_rhs(e, pat.thetas());
      const VectorXcd y = a.entries * g + noise;
      const auto r = qcbp_solve({a.entries, y, noise.norm()});
      errs.push_back((r.z - g).norm());
    }
    std::nth_element(errs.begin(), errs.begin() + 4, errs.end());
    medians.push_back(errs[4]);
  }
  for (int i = 0; i < 2; ++i) {
    const double ratio = medians[i + 1] / medians[i];
    CHECK(ratio > 10.0 / 3.0);
    CHECK(ratio < 30.0);
  }
}

TEST_CASE("phase transition edge rows and determinism") {
  PhaseTransitionSpec spec;
  spec.bandwidth = 3;
  spec.m_grid = {4, 9};
  spec.s_grid = {0, 3};
  spec.trials = 4;
  spec.seed = 21;
  for (auto family : {PatternFamily::Spiral, PatternFamily::Uniform}) {
    spec.family = family;
    const auto cells = phase_transition(spec);
    REQUIRE(cells.size() == 4);
    for (const auto& c : cells) {
      CHECK(c.errors == 0);
      if (c.s == 0 || c.m == 9) CHECK(c.rate == 1.0);
    }
    const auto again = phase_transition(spec);
    for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].successes == again[i].successes);
    CHECK(phase_csv(cells).rfind("m,s,trials,successes,rate\n", 0) == 0);
  }
  CHECK(transition_boundary({{10, 5, 4, 1, 0, 0.25}, {20, 5, 4, 2, 0, 0.5}, {30, 5, 4, 4, 0, 1.0}}, 5) == 20);
  CHECK_FALSE(transition_boundary({{10, 5, 4, 1, 0, 0.25}}, 5).has_value());
  spec.trials = 0;
  CHECK_THROWS_AS(phase_transition(spec), InvalidArgument);
}

TEST_CASE("family names") {
  CHECK(parse_pattern_family("tan13") == PatternFamily::Tan13);
  CHECK(is_random(PatternFamily::Uniform));
  CHECK_FALSE(is_random(PatternFamily::Proposed));
  CHECK(family_preconditioner(PatternFamily::Uniform) == Preconditioner::SinSqrt);
  CHECK(family_preconditioner(PatternFamily::Spiral) == Preconditioner::None);
  CHECK(parse_solver("bp") == SolverKind::Qcbp);
  CHECK(parse_solver("omp") == SolverKind::Omp);
  CHECK_THROWS_AS(parse_solver("amp"), InvalidArgument);
  CHECK_THROWS_AS(parse_pattern_family("grid"), InvalidArgument);
}

}  // TEST_SUITE
