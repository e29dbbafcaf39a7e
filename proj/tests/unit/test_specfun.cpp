#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracle_values.hpp"
#include "quadrature.hpp"
#include "spherecs/error.hpp"
#include "spherecs/specfun.hpp"

using namespace spherecs;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

int parity(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("legendre examples and oracle") {
  CHECK(assoc_legendre(0, 0, 0.3) == 1.0);
  CHECK(assoc_legendre(2, 0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(assoc_legendre(1, 1, 0.5) == doctest::Approx(-0.8660254037844386).epsilon(1e-14));
  for (const auto& c : oracle::kLegendre) {
    INFO("l=" << c.l << " k=" << c.k << " x=" << c.x);
    CHECK(rel(assoc_legendre(c.l, c.k, c.x), c.value) < 1e-13);
  }
}

TEST_CASE("legendre domain errors") {
  CHECK_THROWS_AS(assoc_legendre(2, 0, 1.5), DomainError);
  CHECK_THROWS_AS(assoc_legendre(2, 3, 0.1), DomainError);
  CHECK_THROWS_AS(assoc_legendre(-1, 0, 0.1), DomainError);
  CHECK_THROWS_AS(assoc_legendre(2, -1, 0.1), DomainError);
}

TEST_CASE("normalized legendre stays bounded at high degree") {
  for (int l : {50, 120, 200}) {
    for (int k : {0, 1, l / 2, l}) {
      for (double x : {-0.999, -0.3, 0.0, 0.41, 0.9999}) {
        const double v = assoc_legendre_normalized(l, k, x);
        REQUIRE(std::isfinite(v));
        CHECK(std::abs(v) <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("jacobi examples and oracle") {
  CHECK(jacobi(0, 3, 2, 0.7) == 1.0);
  CHECK(jacobi(1, 0, 0, 0.5) == doctest::Approx(0.5));
  for (const auto& c : oracle::kJacobi) {
    INFO("alpha=" << c.alpha << " xi=" << c.xi << " lambda=" << c.lambda << " x=" << c.x);
    CHECK(rel(jacobi(c.alpha, c.xi, c.lambda, c.x), c.value) < 1e-13);
  }
  CHECK_THROWS_AS(jacobi(-1, 0, 0, 0.0), DomainError);
  CHECK_THROWS_AS(jacobi(1, -1, 0, 0.0), DomainError);
  CHECK_THROWS_AS(jacobi(1, 0, 0, -1.01), DomainError);
}

TEST_CASE("jacobi params") {
  const auto p = JacobiParams::from({3, 1, -2});
  CHECK(p.xi == 3);
  CHECK(p.lambda == 1);
  CHECK(p.alpha == 1);
  // 1! 5! / (4! 2!)
  CHECK(p.gamma == doctest::Approx(120.0 / 48.0));
  CHECK(p.omega == -1);
  CHECK(JacobiParams::from({3, -2, 1}).omega == 1);
  CHECK_THROWS_AS(JacobiParams::from({1, 2, 0}), DomainError);
}

TEST_CASE("wigner small d") {
  for (int l = 0; l < 5; ++l)
    for (int k = -l; k <= l; ++k)
      for (int n = -l; n <= l; ++n) CHECK(wigner_d({l, k, n}, 0.0) == (k == n ? 1.0 : 0.0));
  for (double t : {0.0, 0.3, 1.2, 2.9, pi})
    CHECK(wigner_d({1, 0, 0}, t) == doctest::Approx(std::cos(t)).epsilon(1e-14));
  for (const auto& c : oracle::kWignerSmallD) {
    INFO("l=" << c.l << " k=" << c.k << " n=" << c.n << " theta=" << c.theta);
    CHECK(std::abs(wigner_d({c.l, c.k, c.n}, c.theta) - c.value) < 1e-13);
  }
  CHECK_THROWS_AS(wigner_d({1, 0, 0}, -0.1), DomainError);
  CHECK_THROWS_AS(wigner_d({1, 0, 0}, pi + 1e-9), DomainError);
  CHECK_THROWS_AS(wigner_d({1, 2, 0}, 0.5), DomainError);
}

TEST_CASE("wigner small d endpoints are finite") {
  for (int l = 0; l < 10; ++l)
    for (int k = -l; k <= l; ++k)
      for (int n = -l; n <= l; ++n) {
        const double v = wigner_d({l, k, n}, pi);
        REQUIRE(std::isfinite(v));
        // d_l^{k,n}(pi) = (-1)^(l+n) delta_{k,-n}
        CHECK(v == doctest::Approx(k == -n ? parity(l + n) : 0.0));
      }
}

TEST_CASE("wigner small d order symmetry") {
  for (int l = 0; l < 8; ++l)
    for (int k = -l; k <= l; ++k)
      for (int n = -l; n <= l; ++n)
        for (int i = 0; i < 100; ++i) {
          const double t = i == 99 ? pi : pi * i / 99.0;
          const double a = wigner_d({l, k, n}, t);
          const double b = parity(n - k) * wigner_d({l, -k, -n}, t);
          CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
        }
}

TEST_CASE("spherical harmonic") {
  CHECK(std::abs(spherical_harmonic(0, 0, 1.1, 2.3) - 1.0 / std::sqrt(4.0 * pi)) < 1e-15);
  for (int l = 0; l < 12; ++l)
    CHECK(spherical_harmonic(l, 0, 0.0, 0.7).real() ==
          doctest::Approx(std::sqrt((2.0 * l + 1.0) / (4.0 * pi))).epsilon(1e-13));
  for (const auto& c : oracle::kHarmonic) {
    INFO("l=" << c.l << " k=" << c.k);
    const auto v = spherical_harmonic(c.l, c.k, c.theta, c.phi);
    CHECK(std::abs(v - std::complex<double>(c.re, c.im)) < 1e-13);
  }
  for (int l = 0; l < 6; ++l)
    for (int k = -l; k <= l; ++k) {
      const auto a = std::conj(spherical_harmonic(l, k, 0.8, 4.1));
      const auto b = double(parity(k)) * spherical_harmonic(l, -k, 0.8, 4.1);
      CHECK(std::abs(a - b) < 1e-14);
    }
  CHECK_THROWS_AS(spherical_harmonic(2, 3, 0.1, 0.1), DomainError);
}

TEST_CASE("wigner D relations") {
  CHECK(std::abs(wigner_D({0, 0, 0}, 0.4, 1.0, 2.0) - 1.0 / std::sqrt(8.0 * pi * pi)) < 1e-15);
  for (int l = 0; l < 6; ++l)
    for (int k = -l; k <= l; ++k) {
      const auto d = wigner_D({l, -k, 0}, 1.3, 0.9, 0.0);
      const auto y = double(parity(k)) * std::sqrt(1.0 / (2.0 * pi)) * spherical_harmonic(l, k, 1.3, 0.9);
      CHECK(std::abs(d - y) < 1e-14);
      for (int n = -l; n <= l; ++n) {
        const auto a = std::conj(wigner_D({l, k, n}, 2.2, 5.0, 0.3));
        const auto b = double(parity(k - n)) * wigner_D({l, -k, -n}, 2.2, 5.0, 0.3);
        CHECK(std::abs(a - b) < 1e-14);
      }
    }
  CHECK_THROWS_AS(wigner_D({1, 0, 2}, 0.1, 0.0, 0.0), DomainError);
}

TEST_CASE("wigner 3j") {
  CHECK(wigner3j(1, 1, 1, 0, 0, 0) == 0.0);
  CHECK(wigner3j(2, 1, 1, 1, 1, 1) == 0.0);
  CHECK(wigner3j(1, 1, 0, 0, 0, 0) == doctest::Approx(-0.5773502691896258).epsilon(1e-15));
  CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);
  CHECK(wigner3j(1, 1, 1, 2, -1, -1) == 0.0);
  for (const auto& c : oracle::kThreeJ) {
    INFO(c.l1 << c.l2 << c.l3 << " " << c.k1 << " " << c.k2 << " " << c.k3);
    CHECK(std::abs(wigner3j(c.l1, c.l2, c.l3, c.k1, c.k2, c.k3) - c.value) < 1e-14);
  }
}

TEST_CASE("wigner 3j column swap") {
  for (int l1 = 0; l1 <= 5; ++l1)
    for (int l2 = 0; l2 <= 5; ++l2)
      for (int l3 = std::abs(l1 - l2); l3 <= std::min(5, l1 + l2); ++l3)
        for (int k1 = -l1; k1 <= l1; ++k1)
          for (int k2 = -l2; k2 <= l2; ++k2) {
            const int k3 = -k1 - k2;
            if (std::abs(k3) > l3) continue;
            const double v = wigner3j(l1, l2, l3, k1, k2, k3);
            const double s = parity(l1 + l2 + l3);
            CHECK(std::abs(wigner3j(l2, l1, l3, k2, k1, k3) - s * v) < 1e-14);
            CHECK(std::abs(wigner3j(l1, l3, l2, k1, k3, k2) - s * v) < 1e-14);
            CHECK(std::abs(wigner3j(l2, l3, l1, k2, k3, k1) - v) < 1e-14);
          }
}

TEST_CASE("wigner 3j orthogonality in l3") {
  // sum_{l3,k3} (2 l3 + 1) 3j(l1 l2 l3; k1 k2 k3)^2 = 1
  for (int l1 = 0; l1 <= 6; ++l1)
    for (int l2 = 0; l2 <= 6; ++l2)
      for (int k1 = -l1; k1 <= l1; ++k1)
        for (int k2 = -l2; k2 <= l2; ++k2) {
          double sum = 0.0;
          for (int l3 = std::abs(l1 - l2); l3 <= l1 + l2; ++l3) {
            const double v = wigner3j(l1, l2, l3, k1, k2, -k1 - k2);
            sum += (2.0 * l3 + 1.0) * v * v;
          }
          CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("log factorial") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(10) == doctest::Approx(std::log(3628800.0)).epsilon(1e-15));
  CHECK(log_factorial(600) == doctest::Approx(std::lgamma(601.0)).epsilon(1e-14));
}

TEST_CASE("harmonic orthonormality on a small band") {
  const int lmax = 4;
  const auto [x, w] = testsupport::gauss_legendre(lmax + 2);
  const int nphi = 2 * lmax + 2;
  for (int l1 = 0; l1 <= lmax; ++l1)
    for (int k1 = -l1; k1 <= l1; ++k1)
      for (int l2 = 0; l2 <= lmax; ++l2)
        for (int k2 = -l2; k2 <= l2; ++k2) {
          std::complex<double> s = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i)
            for (int j = 0; j < nphi; ++j) {
              const double t = std::acos(x[i]);
              const double p = 2.0 * pi * j / nphi;
              s += w[i] * (2.0 * pi / nphi) * spherical_harmonic(l1, k1, t, p) *
                   std::conj(spherical_harmonic(l2, k2, t, p));
            }
          CHECK(std::abs(s - (l1 == l2 && k1 == k2 ? 1.0 : 0.0)) < 1e-12);
        }
}

}  // TEST_SUITE
