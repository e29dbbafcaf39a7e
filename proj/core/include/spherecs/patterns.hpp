#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spherecs/domain.hpp"

namespace spherecs {

/// One sample location. chi is meaningful only on SO(3) and is 0 on S^2.
struct SamplePoint {
  double theta = 0.0;  ///< elevation (colatitude) in [0, pi]
  double phi = 0.0;    ///< azimuth in [0, 2 pi)
  double chi = 0.0;    ///< polarization in [0, 2 pi)
};

/// How a pattern was produced; enough to regenerate it bit-identically.
struct Provenance {
  std::string generator;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  /// Value of a named parameter, or empty when absent.
  std::string param(const std::string& key) const;
  void set_param(const std::string& key, std::string value);
};

class SamplingPattern {
public:
  SamplingPattern() = default;
  /// Validates every point against the domain's angle ranges (throws DomainError).
  SamplingPattern(Domain domain, std::vector<SamplePoint> points, Provenance provenance = {});

  Domain domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const std::vector<SamplePoint>& points() const noexcept { return points_; }
  const SamplePoint& operator[](std::size_t i) const { return points_[i]; }
  const Provenance& provenance() const noexcept { return provenance_; }
  Provenance& provenance() noexcept { return provenance_; }

  std::vector<double> thetas() const;
  std::vector<double> phis() const;
  std::vector<double> chis() const;

private:
  Domain domain_ = Domain::S2;
  std::vector<SamplePoint> points_;
  Provenance provenance_;
};

enum class RegularKind { Equiangular, Spiral, Fibonacci, Hammersley };
enum class RandomMeasure { Uniform, Tan13 };

std::string_view to_string(RegularKind kind);
std::string_view to_string(RandomMeasure measure);
RegularKind parse_regular_kind(std::string_view text);
RandomMeasure parse_random_measure(std::string_view text);

/// Reduces an angle to [0, 2 pi).
double wrap_angle(double angle) noexcept;

/// Elevations with cos(theta_p) = (2p - m - 1)/(m - 1), p = 1..m, so theta runs from pi down to 0.
std::vector<double> equispaced_elevation(int m);

/// Deterministic regular pattern on S^2 or SO(3).
///
///  equiangular  theta_p = pi (p-1)/(m-1), phi_p = 2 pi (p-1)/(m-1) mod 2 pi, chi_p = phi_p
///  spiral       Saff-Kuijlaars: h_p = -1 + 2(p-1)/(m-1), theta_p = acos h_p,
///               phi_1 = phi_m = 0, phi_p = phi_{p-1} + 3.6 / sqrt(m (1 - h_p^2)) mod 2 pi
///  fibonacci    cos theta_p = 1 - (2p-1)/m, phi_p = 2 pi p (1 - 1/golden) mod 2 pi
///  hammersley   cos theta_p = 1 - (2p-1)/m, phi_p = 2 pi * (base-2 radical inverse of p-1)
///
/// On SO(3), spiral and hammersley take chi_p = 2 pi p (1 - 1/golden) mod 2 pi; fibonacci,
/// whose azimuth already is that sequence, takes chi_p = 2 pi frac(p sqrt 2) instead.
SamplingPattern regular_pattern(RegularKind kind, int m, Domain domain);

/// i.i.d. random pattern. Uniform draws theta uniformly on [0, pi] (not from sin theta);
/// Tan13 draws theta with density proportional to |tan theta|^(1/3). phi and chi are uniform.
SamplingPattern random_pattern(RandomMeasure measure, int m, Domain domain, std::uint64_t seed);

/// Replays a provenance record produced by regular_pattern or random_pattern.
/// Throws InvalidArgument for other generators, whose angles are not in the record.
SamplingPattern regenerate(const Provenance& provenance, Domain domain);

/// Equispaced elevations with caller-supplied azimuths (and polarizations on SO(3)).
SamplingPattern equispaced_pattern(std::span<const double> phis, std::span<const double> chis,
                                   Domain domain);

/// True iff the multiset {cos theta_p} is invariant under negation within tol.
bool is_cosine_symmetric(std::span<const double> thetas, double tol = 1e-12);

/// Normalized CDF of the density c |tan theta|^(1/3) on [0, pi] (closed form).
double tan13_cdf(double theta);

/// Inverse of tan13_cdf through the 16384-knot monotone-cubic table.
double tan13_inverse_cdf(double u);

}  // namespace spherecs
