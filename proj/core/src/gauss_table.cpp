#include "spherecs/gauss_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spherecs/error.hpp"
#include "spherecs/rng.hpp"
#include "spherecs/sensing.hpp"
#include "spherecs/specfun.hpp"

namespace spherecs {
namespace {

// (-1)^k sqrt((2 - delta_k0) (l-k)!/(l+k)!)
double schmidt(int l, int k) {
  const double r = std::exp(0.5 * (log_factorial(l - k) - log_factorial(l + k)));
  const double s = k == 0 ? r : std::sqrt(2.0) * r;
  return (k % 2 == 0) ? s : -s;
}

// N_l^k of the orthonormal harmonic.
double harmonic_norm(int l, int k) {
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi)) *
         std::exp(0.5 * (log_factorial(l - k) - log_factorial(l + k)));
}

double radial(const GaussCoefficientTable& t, int l) {
  return t.reference_radius * std::pow(t.reference_radius / t.evaluation_radius, l + 1);
}

}  // namespace

void GaussCoefficientTable::resize(int b) {
  if (b < 1) throw InvalidArgument("gauss table: bandwidth must be >= 1");
  bandwidth = b;
  const auto n = static_cast<std::size_t>(b) * static_cast<std::size_t>(b + 1) / 2;
  g_.assign(n, 0.0);
  h_.assign(n, 0.0);
}

std::size_t GaussCoefficientTable::slot(int l, int k) const {
  if (l < 0 || l >= bandwidth || k < 0 || k > l) {
    throw InvalidArgument("gauss table: (l, k) = (" + std::to_string(l) + ", " + std::to_string(k) +
                          ") outside the table");
  }
  return static_cast<std::size_t>(l) * static_cast<std::size_t>(l + 1) / 2 + static_cast<std::size_t>(k);
}

void GaussCoefficientTable::validate() const {
  if (bandwidth < 2) throw InvalidArgument("gauss table: bandwidth must be >= 2");
  if (!(reference_radius > 0.0) || !(evaluation_radius > 0.0)) {
    throw InvalidArgument("gauss table: radii must be positive");
  }
}

std::size_t GaussCoefficientTable::complex_sparsity(double tol) const {
  std::size_t s = 0;
  for (int l = 1; l < bandwidth; ++l) {
    if (std::abs(g(l, 0)) > tol) ++s;
    for (int k = 1; k <= l; ++k) {
      if (std::abs(g(l, k)) > tol || std::abs(h(l, k)) > tol) s += 2;
    }
  }
  return s;
}

GaussCoefficientTable parse_gauss_table(const std::string& text) {
  struct Entry {
    char kind;
    int l;
    int k;
    double value;
    int line;
  };
  std::vector<Entry> entries;
  double epoch = 2015.0;
  double a = 6371.2;
  double r = -1.0;
  int max_l = 0;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "epoch" || head == "radius" || head == "altitude_radius") {
      double v;
      if (!(ls >> v)) throw ParseError("expected a number after '" + head + "'", line_no);
      (head == "epoch" ? epoch : head == "radius" ? a : r) = v;
      continue;
    }
    if (head != "g" && head != "h") {
      throw ParseError("expected 'g' or 'h', got '" + head + "'", line_no);
    }
    Entry e{head[0], 0, 0, 0.0, line_no};
    if (!(ls >> e.l >> e.k >> e.value)) throw ParseError("expected 'l k value'", line_no);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
    if (e.l < 1 || e.k < 0 || e.k > e.l) {
      throw ParseError("invalid degree/order (" + std::to_string(e.l) + ", " + std::to_string(e.k) + ")",
                       line_no);
    }
    if (e.kind == 'h' && e.k == 0 && e.value != 0.0) {
      throw ParseError("h with k = 0 must be zero", line_no);
    }
    max_l = std::max(max_l, e.l);
    entries.push_back(e);
  }
  if (max_l < 1) throw ParseError("no coefficients found");

  GaussCoefficientTable t(max_l + 1);
  t.epoch = epoch;
  t.reference_radius = a;
  t.evaluation_radius = r > 0.0 ? r : a;
  std::vector<char> seen_g(static_cast<std::size_t>((max_l + 1) * (max_l + 2) / 2), 0);
  std::vector<char> seen_h(seen_g.size(), 0);
  for (const auto& e : entries) {
    const auto idx = static_cast<std::size_t>(e.l * (e.l + 1) / 2 + e.k);
    auto& seen = e.kind == 'g' ? seen_g : seen_h;
    if (seen[idx]) throw ParseError(std::string(1, e.kind) + " coefficient repeated", e.line);
    seen[idx] = 1;
    (e.kind == 'g' ? t.g(e.l, e.k) : t.h(e.l, e.k)) = e.value;
  }
  for (int l = 1; l <= max_l; ++l) {
    for (int k = 0; k <= l; ++k) {
      const auto idx = static_cast<std::size_t>(l * (l + 1) / 2 + k);
      if (!seen_g[idx] || (k > 0 && !seen_h[idx])) {
        throw ParseError("missing coefficient " + std::string(seen_g[idx] ? "h" : "g") + " " +
                         std::to_string(l) + " " + std::to_string(k));
      }
    }
  }
  return t;
}

GaussCoefficientTable load_gauss_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gauss_table(ss.str());
}

std::string format_gauss_table(const GaussCoefficientTable& t) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "epoch %.17g\nradius %.17g\naltitude_radius %.17g\n", t.epoch,
                t.reference_radius, t.evaluation_radius);
  out += buf;
  for (int l = 1; l < t.bandwidth; ++l) {
    for (int k = 0; k <= l; ++k) {
      std::snprintf(buf, sizeof buf, "g %d %d %.17g\n", l, k, t.g(l, k));
      out += buf;
      if (k > 0) {
        std::snprintf(buf, sizeof buf, "h %d %d %.17g\n", l, k, t.h(l, k));
        out += buf;
      }
    }
  }
  return out;
}

GaussCoefficientTable synthetic_gauss_table(int bandwidth, std::size_t s, std::uint64_t seed) {
  GaussCoefficientTable t(bandwidth);
  t.validate();
  const std::size_t capacity = static_cast<std::size_t>(bandwidth) * bandwidth - 1;
  if (s > capacity) throw InvalidArgument("synthetic_gauss_table: s exceeds B^2 - 1");

  // Terms (l, k): k = 0 costs one complex coefficient, k > 0 costs two.
  std::vector<std::pair<int, int>> zonal;
  std::vector<std::pair<int, int>> sectoral;
  for (int l = 1; l < bandwidth; ++l) {
    zonal.emplace_back(l, 0);
    for (int k = 1; k <= l; ++k) sectoral.emplace_back(l, k);
  }
  Rng rng(seed);
  auto take = [&](std::vector<std::pair<int, int>>& pool) {
    const std::size_t j = static_cast<std::size_t>(rng.index(pool.size()));
    const auto term = pool[j];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    return term;
  };
  std::size_t left = s;
  while (left > 0) {
    const bool use_zonal =
        left == 1 || sectoral.empty() ||
        (!zonal.empty() && rng.index(zonal.size() + 2 * sectoral.size()) < zonal.size());
    if (use_zonal && zonal.empty()) throw InvalidArgument("synthetic_gauss_table: cannot place s terms");
    const auto [l, k] = take(use_zonal ? zonal : sectoral);
    const double scale = 3.0e4 / (l * l);
    t.g(l, k) = scale * rng.normal();
    if (k > 0) t.h(l, k) = scale * rng.normal();
    left -= (k == 0) ? 1 : 2;
  }
  return t;
}

Eigen::VectorXcd gauss_to_complex(const GaussCoefficientTable& t) {
  t.validate();
  const BasisEnumeration basis(Domain::S2, t.bandwidth);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (int l = 1; l < t.bandwidth; ++l) {
    const double rho = radial(t, l);
    for (int k = 0; k <= l; ++k) {
      const double f = rho * schmidt(l, k) / harmonic_norm(l, k);
      const auto pos = static_cast<Eigen::Index>(basis.column_of({l, k, 0}));
      if (k == 0) {
        c(pos) = f * t.g(l, 0);
        continue;
      }
      const std::complex<double> gh(t.g(l, k), -t.h(l, k));
      c(pos) = 0.5 * f * gh;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      c(static_cast<Eigen::Index>(basis.column_of({l, -k, 0}))) = 0.5 * f * sign * std::conj(gh);
    }
  }
  return c;
}

GaussCoefficientTable complex_to_gauss(const Eigen::VectorXcd& c, int bandwidth,
                                       double reference_radius, double evaluation_radius) {
  const BasisEnumeration basis(Domain::S2, bandwidth);
  if (static_cast<std::size_t>(c.size()) != basis.size()) {
    throw InvalidArgument("complex_to_gauss: expected " + std::to_string(basis.size()) + " coefficients");
  }
  GaussCoefficientTable t(bandwidth);
  t.reference_radius = reference_radius;
  t.evaluation_radius = evaluation_radius;
  t.validate();
  for (int l = 1; l < bandwidth; ++l) {
    const double rho = radial(t, l);
    for (int k = 0; k <= l; ++k) {
      const double f = rho * schmidt(l, k) / harmonic_norm(l, k);
      const auto pos = static_cast<Eigen::Index>(basis.column_of({l, k, 0}));
      if (k == 0) {
        t.g(l, 0) = c(pos).real() / f;
        continue;
      }
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const std::complex<double> neg = c(static_cast<Eigen::Index>(basis.column_of({l, -k, 0})));
      // g - i h from c^k and from (-1)^k conj(c^-k); their mean is the real-field projection.
      const std::complex<double> gh = (c(pos) + sign * std::conj(neg)) / f;
      t.g(l, k) = gh.real();
      t.h(l, k) = -gh.imag();
    }
  }
  return t;
}

double gauss_potential(const GaussCoefficientTable& t, double theta, double phi) {
  const double x = std::cos(theta);
  double v = 0.0;
  for (int l = 1; l < t.bandwidth; ++l) {
    const double rho = radial(t, l);
    double inner = 0.0;
    for (int k = 0; k <= l; ++k) {
      inner += schmidt(l, k) * assoc_legendre(l, k, x) *
               (t.g(l, k) * std::cos(k * phi) + t.h(l, k) * std::sin(k * phi));
    }
    v += rho * inner;
  }
  return v;
}

}  // namespace spherecs
