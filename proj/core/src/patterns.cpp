#include "spherecs/patterns.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "spherecs/error.hpp"
#include "spherecs/rng.hpp"

namespace spherecs {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGoldenStep = 1.0 - 1.0 / std::numbers::phi;  // fraction of a turn
constexpr int kTan13Knots = 16384;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double fractional(double x) { return x - std::floor(x); }

double radical_inverse_base2(std::uint32_t i) {
  double inv = 0.0;
  double f = 0.5;
  while (i != 0) {
    if (i & 1u) inv += f;
    i >>= 1;
    f *= 0.5;
  }
  return inv;
}

void require_count(int m, int minimum, const char* fn) {
  if (m < minimum) {
    throw InvalidArgument(std::string(fn) + ": need m >= " + std::to_string(minimum));
  }
}

double clamp_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

Provenance make_provenance(std::string generator, int m, Domain domain, std::uint64_t seed = 0) {
  Provenance p;
  p.generator = std::move(generator);
  p.seed = seed;
  p.set_param("m", std::to_string(m));
  p.set_param("domain", std::string(to_string(domain)));
  return p;
}

// Monotone-cubic (Fritsch-Butland) interpolant of theta as a function of the CDF value.
struct InverseCdfTable {
  std::array<double, kTan13Knots> u{};
  std::array<double, kTan13Knots> theta{};
  std::array<double, kTan13Knots> slope{};

  InverseCdfTable() {
    for (int i = 0; i < kTan13Knots; ++i) {
      theta[i] = std::numbers::pi * i / (kTan13Knots - 1);
      u[i] = tan13_cdf(theta[i]);
    }
    u.front() = 0.0;
    u.back() = 1.0;
    std::array<double, kTan13Knots - 1> secant{};
    for (int i = 0; i + 1 < kTan13Knots; ++i) {
      secant[i] = (theta[i + 1] - theta[i]) / (u[i + 1] - u[i]);
    }
    slope.front() = secant.front();
    slope.back() = secant.back();
    for (int i = 1; i + 1 < kTan13Knots; ++i) {
      const double h0 = u[i] - u[i - 1];
      const double h1 = u[i + 1] - u[i];
      const double d0 = secant[i - 1];
      const double d1 = secant[i];
      slope[i] = (d0 * d1 <= 0.0) ? 0.0 : 3.0 * (h0 + h1) / ((2.0 * h1 + h0) / d0 + (h1 + 2.0 * h0) / d1);
    }
  }

  std::size_t interval(double x) const {
    const auto it = std::upper_bound(u.begin(), u.end(), x);
    return std::min(static_cast<std::size_t>(it - u.begin()) - 1, u.size() - 2);
  }

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return std::numbers::pi;
    const std::size_t i = interval(x);
    const double h = u[i + 1] - u[i];
    const double t = (x - u[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * theta[i] + (t3 - 2 * t2 + t) * h * slope[i] +
           (-2 * t3 + 3 * t2) * theta[i + 1] + (t3 - t2) * h * slope[i + 1];
  }
};

const InverseCdfTable& tan13_table() {
  static const InverseCdfTable table;
  return table;
}

}  // namespace

Domain parse_domain(std::string_view text) {
  const std::string t = lower(text);
  if (t == "s2") return Domain::S2;
  if (t == "so3") return Domain::SO3;
  throw InvalidArgument("unknown domain '" + std::string(text) + "' (expected S2 or SO3)");
}

std::string Provenance::param(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return {};
}

void Provenance::set_param(const std::string& key, std::string value) {
  for (auto& [k, v] : params) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  params.emplace_back(key, std::move(value));
}

SamplingPattern::SamplingPattern(Domain domain, std::vector<SamplePoint> points, Provenance provenance)
    : domain_(domain), points_(std::move(points)), provenance_(std::move(provenance)) {
  for (const auto& p : points_) {
    if (!(p.theta >= 0.0 && p.theta <= std::numbers::pi)) {
      throw DomainError("sample elevation outside [0, pi]");
    }
    if (!(p.phi >= 0.0 && p.phi < kTwoPi)) throw DomainError("sample azimuth outside [0, 2 pi)");
    if (domain_ == Domain::SO3) {
      if (!(p.chi >= 0.0 && p.chi < kTwoPi)) {
        throw DomainError("sample polarization outside [0, 2 pi)");
      }
    } else if (p.chi != 0.0) {
      throw DomainError("S2 sample carries a polarization angle");
    }
  }
}

std::vector<double> SamplingPattern::thetas() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.theta);
  return out;
}

std::vector<double> SamplingPattern::phis() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.phi);
  return out;
}

std::vector<double> SamplingPattern::chis() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.chi);
  return out;
}

std::string_view to_string(RegularKind kind) {
  switch (kind) {
    case RegularKind::Equiangular: return "equiangular";
    case RegularKind::Spiral: return "spiral";
    case RegularKind::Fibonacci: return "fibonacci";
    case RegularKind::Hammersley: return "hammersley";
  }
  return "?";
}

std::string_view to_string(RandomMeasure measure) {
  return measure == RandomMeasure::Uniform ? "uniform" : "tan13";
}

RegularKind parse_regular_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "equiangular") return RegularKind::Equiangular;
  if (t == "spiral") return RegularKind::Spiral;
  if (t == "fibonacci") return RegularKind::Fibonacci;
  if (t == "hammersley") return RegularKind::Hammersley;
  throw InvalidArgument("unsupported regular pattern kind '" + std::string(text) + "'");
}

RandomMeasure parse_random_measure(std::string_view text) {
  const std::string t = lower(text);
  if (t == "uniform") return RandomMeasure::Uniform;
  if (t == "tan13") return RandomMeasure::Tan13;
  throw InvalidArgument("unsupported random measure '" + std::string(text) + "'");
}

double wrap_angle(double angle) noexcept {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

std::vector<double> equispaced_elevation(int m) {
  require_count(m, 2, "equispaced_elevation");
  std::vector<double> thetas(static_cast<std::size_t>(m));
  for (int p = 1; p <= m; ++p) {
    const double c = static_cast<double>(2 * p - m - 1) / static_cast<double>(m - 1);
    thetas[static_cast<std::size_t>(p - 1)] = clamp_acos(c);
  }
  return thetas;
}

SamplingPattern regular_pattern(RegularKind kind, int m, Domain domain) {
  require_count(m, 2, "regular_pattern");
  std::vector<SamplePoint> pts(static_cast<std::size_t>(m));
  const double mm = static_cast<double>(m);

  switch (kind) {
    case RegularKind::Equiangular:
      for (int p = 1; p <= m; ++p) {
        auto& pt = pts[static_cast<std::size_t>(p - 1)];
        pt.theta = std::numbers::pi * (p - 1) / (mm - 1.0);
        pt.phi = wrap_angle(kTwoPi * (p - 1) / (mm - 1.0));
        if (domain == Domain::SO3) pt.chi = pt.phi;
      }
      pts.back().theta = std::numbers::pi;
      break;

    case RegularKind::Spiral: {
      double phi = 0.0;
      for (int p = 1; p <= m; ++p) {
        auto& pt = pts[static_cast<std::size_t>(p - 1)];
        const double h = -1.0 + 2.0 * (p - 1) / (mm - 1.0);
        pt.theta = clamp_acos(h);
        if (p == 1 || p == m) {
          phi = 0.0;
        } else {
          phi = wrap_angle(phi + 3.6 / std::sqrt(mm * (1.0 - h * h)));
        }
        pt.phi = phi;
        if (domain == Domain::SO3) pt.chi = kTwoPi * fractional(p * kGoldenStep);
      }
      break;
    }

    case RegularKind::Fibonacci:
      for (int p = 1; p <= m; ++p) {
        auto& pt = pts[static_cast<std::size_t>(p - 1)];
        pt.theta = clamp_acos(1.0 - (2.0 * p - 1.0) / mm);
        pt.phi = wrap_angle(kTwoPi * fractional(p * kGoldenStep));
        if (domain == Domain::SO3) pt.chi = wrap_angle(kTwoPi * fractional(p * std::numbers::sqrt2));
      }
      break;

    case RegularKind::Hammersley:
      for (int p = 1; p <= m; ++p) {
        auto& pt = pts[static_cast<std::size_t>(p - 1)];
        pt.theta = clamp_acos(1.0 - (2.0 * p - 1.0) / mm);
        pt.phi = wrap_angle(kTwoPi * radical_inverse_base2(static_cast<std::uint32_t>(p - 1)));
        if (domain == Domain::SO3) pt.chi = wrap_angle(kTwoPi * fractional(p * kGoldenStep));
      }
      break;
  }
  return SamplingPattern(domain, std::move(pts), make_provenance(std::string(to_string(kind)), m, domain));
}

SamplingPattern random_pattern(RandomMeasure measure, int m, Domain domain, std::uint64_t seed) {
  require_count(m, 1, "random_pattern");
  Rng rng(seed);
  std::vector<SamplePoint> pts(static_cast<std::size_t>(m));
  for (auto& pt : pts) {
    const double u = rng.uniform();
    pt.theta = measure == RandomMeasure::Uniform ? std::numbers::pi * u : tan13_inverse_cdf(u);
    pt.phi = rng.uniform(0.0, kTwoPi);
    if (domain == Domain::SO3) pt.chi = rng.uniform(0.0, kTwoPi);
  }
  return SamplingPattern(domain, std::move(pts),
                         make_provenance("random-" + std::string(to_string(measure)), m, domain, seed));
}

SamplingPattern regenerate(const Provenance& provenance, Domain domain) {
  const std::string m_text = provenance.param("m");
  if (m_text.empty()) throw InvalidArgument("provenance lacks the sample count 'm'");
  const int m = std::stoi(m_text);
  const std::string& g = provenance.generator;
  if (g.rfind("random-", 0) == 0) {
    return random_pattern(parse_random_measure(g.substr(7)), m, domain, provenance.seed);
  }
  return regular_pattern(parse_regular_kind(g), m, domain);
}

SamplingPattern equispaced_pattern(std::span<const double> phis, std::span<const double> chis,
                                   Domain domain) {
  const int m = static_cast<int>(phis.size());
  const auto thetas = equispaced_elevation(m);
  if (domain == Domain::SO3 && chis.size() != phis.size()) {
    throw InvalidArgument("equispaced_pattern: need one polarization per azimuth");
  }
  std::vector<SamplePoint> pts(phis.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    pts[p].theta = thetas[p];
    pts[p].phi = wrap_angle(phis[p]);
    if (domain == Domain::SO3) pts[p].chi = wrap_angle(chis[p]);
  }
  return SamplingPattern(domain, std::move(pts), make_provenance("equispaced", m, domain));
}

bool is_cosine_symmetric(std::span<const double> thetas, double tol) {
  if (thetas.empty()) throw InvalidArgument("is_cosine_symmetric: empty elevation list");
  std::vector<double> c(thetas.size());
  std::transform(thetas.begin(), thetas.end(), c.begin(), [](double t) { return std::cos(t); });
  std::sort(c.begin(), c.end());
  for (std::size_t i = 0, j = c.size() - 1; i <= j; ++i, --j) {
    if (std::abs(c[i] + c[j]) > tol) return false;
    if (j == 0) break;
  }
  return true;
}

double tan13_cdf(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("tan13_cdf: theta must lie in [0, pi]");
  }
  if (theta > std::numbers::pi / 2) return 1.0 - tan13_cdf(std::numbers::pi - theta);
  if (theta == std::numbers::pi / 2) return 0.5;
  if (theta == 0.0) return 0.0;
  // With v = tan(theta)^(2/3):
  //   int_0^theta tan^(1/3) = 3/2 [ 1/6 ln((v^2 - v + 1)/(1 + v)^2) + (atan((2v-1)/sqrt3) + pi/6)/sqrt3 ].
  // The full integral over [0, pi] is 2 pi / sqrt3.
  const double v = std::cbrt(std::tan(theta) * std::tan(theta));
  const double sqrt3 = std::numbers::sqrt3;
  const double partial =
      1.5 * (std::log((v * v - v + 1.0) / ((1.0 + v) * (1.0 + v))) / 6.0 +
             (std::atan((2.0 * v - 1.0) / sqrt3) + std::numbers::pi / 6.0) / sqrt3);
  return std::clamp(partial / (2.0 * std::numbers::pi / sqrt3), 0.0, 0.5);
}

double tan13_inverse_cdf(double u) {
  const auto& table = tan13_table();
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return std::numbers::pi;
  // The interpolant is poor next to the singular density at pi/2; polish it with safeguarded
  // Newton steps on the closed-form CDF inside the knot interval.
  const std::size_t i = table.interval(u);
  double lo = table.theta[i];
  double hi = table.theta[i + 1];
  double t = std::clamp(table(u), lo, hi);
  const double norm = 2.0 * std::numbers::pi / std::numbers::sqrt3;
  for (int it = 0; it < 40; ++it) {
    const double f = tan13_cdf(t) - u;
    if (f == 0.0) break;
    (f < 0.0 ? lo : hi) = t;
    const double density = std::cbrt(std::abs(std::tan(t))) / norm;
    double next = t - f / density;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * std::max(1.0, t)) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

}  // namespace spherecs
