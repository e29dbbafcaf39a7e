#include "spherecs/sensing.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "spherecs/error.hpp"
#include "spherecs/parallel.hpp"
#include "spherecs/pattern_io.hpp"

namespace spherecs {
namespace {

constexpr char kMagic[8] = {'S', 'P', 'H', 'C', 'S', 'M', 'A', 'T'};

static_assert(std::endian::native == std::endian::little,
              "matrix export assumes a little-endian host");

void put_u64(std::string& buf, std::uint64_t v) {
  char b[8];
  std::memcpy(b, &v, 8);
  buf.append(b, 8);
}

}  // namespace

BasisEnumeration::BasisEnumeration(Domain domain, int bandwidth)
    : domain_(domain), bandwidth_(bandwidth) {
  if (bandwidth < 1) throw InvalidArgument("enumerate_basis: bandwidth must be >= 1");
  indices_.reserve(basis_dimension(domain, bandwidth));
  for (int l = 0; l < bandwidth; ++l) {
    for (int k = -l; k <= l; ++k) {
      if (domain == Domain::S2) {
        indices_.push_back({l, k, 0});
      } else {
        for (int n = -l; n <= l; ++n) indices_.push_back({l, k, n});
      }
    }
  }
}

std::size_t BasisEnumeration::column_of(const BasisIndex& idx) const {
  if (!idx.valid() || idx.l >= bandwidth_ || (domain_ == Domain::S2 && idx.n != 0)) {
    throw InvalidArgument("basis index outside the enumerated band");
  }
  const std::size_t l = static_cast<std::size_t>(idx.l);
  if (domain_ == Domain::S2) return l * l + static_cast<std::size_t>(idx.k + idx.l);
  // Degrees below l occupy l(2l-1)(2l+1)/3 columns.
  const std::size_t before = l * (2 * l - 1) * (2 * l + 1) / 3;
  const std::size_t width = 2 * l + 1;
  return before + static_cast<std::size_t>(idx.k + idx.l) * width + static_cast<std::size_t>(idx.n + idx.l);
}

std::size_t basis_dimension(Domain domain, int bandwidth) {
  if (bandwidth < 1) throw InvalidArgument("basis_dimension: bandwidth must be >= 1");
  const std::size_t b = static_cast<std::size_t>(bandwidth);
  return domain == Domain::S2 ? b * b : b * (2 * b - 1) * (2 * b + 1) / 3;
}

BasisEnumeration enumerate_basis(Domain domain, int bandwidth) {
  return BasisEnumeration(domain, bandwidth);
}

namespace {
// sin(pi) is 1.2e-16 in floating point; the poles must give exact zero rows.
double endpoint_sin(double theta) {
  return (theta <= 0.0 || theta >= std::numbers::pi) ? 0.0 : std::sin(theta);
}
}  // namespace

double precondition_weight(Preconditioner kind, double theta) {
  switch (kind) {
    case Preconditioner::None: return 1.0;
    case Preconditioner::SinSqrt: return std::sqrt(std::max(0.0, endpoint_sin(theta)));
    case Preconditioner::Tan13: {
      const double s = endpoint_sin(theta);
      return std::pow(std::max(0.0, s * s * std::abs(std::cos(theta))), 1.0 / 6.0);
    }
  }
  return 1.0;
}

std::complex<double> basis_value(Domain domain, const BasisIndex& idx, const SamplePoint& point) {
  if (domain == Domain::S2) return spherical_harmonic(idx.l, idx.k, point.theta, point.phi);
  return wigner_D(idx, point.theta, point.phi, point.chi);
}

SensingMatrix build_matrix(const SamplingPattern& pattern, int bandwidth, Preconditioner preconditioner) {
  if (pattern.empty()) throw InvalidArgument("build_matrix: empty pattern");
  SensingMatrix out;
  out.pattern = pattern;
  out.enumeration = BasisEnumeration(pattern.domain(), bandwidth);
  out.preconditioner = preconditioner;

  const auto m = static_cast<Eigen::Index>(pattern.size());
  const auto n = static_cast<Eigen::Index>(out.enumeration.size());
  out.entries.resize(m, n);

  std::vector<double> weights(static_cast<std::size_t>(m), 1.0);
  if (preconditioner != Preconditioner::None) {
    for (Eigen::Index p = 0; p < m; ++p) {
      weights[static_cast<std::size_t>(p)] = precondition_weight(preconditioner, pattern[static_cast<std::size_t>(p)].theta);
    }
  }

  const Domain domain = pattern.domain();
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t q) {
    const BasisIndex& idx = out.enumeration[q];
    for (Eigen::Index p = 0; p < m; ++p) {
      const auto pi = static_cast<std::size_t>(p);
      out.entries(p, static_cast<Eigen::Index>(q)) = weights[pi] * basis_value(domain, idx, pattern[pi]);
    }
  });

  if (preconditioner != Preconditioner::None) {
    std::size_t zero_rows = 0;
    for (double w : weights) zero_rows += (w == 0.0);
    if (zero_rows > 0) {
      out.pattern.provenance().warnings.push_back(
          std::to_string(zero_rows) + " preconditioned row(s) vanish and carry no information");
    }
  }
  return out;
}

SensingMatrix build_matrix(const SamplingPattern& pattern, int bandwidth, bool precondition) {
  return build_matrix(pattern, bandwidth, precondition ? Preconditioner::SinSqrt : Preconditioner::None);
}

Eigen::VectorXcd precondition_rhs(const Eigen::VectorXcd& y, std::span<const double> thetas,
                                  Preconditioner preconditioner) {
  if (static_cast<std::size_t>(y.size()) != thetas.size()) {
    throw InvalidArgument("precondition_rhs: length mismatch");
  }
  Eigen::VectorXcd out(y.size());
  for (Eigen::Index p = 0; p < y.size(); ++p) {
    out(p) = precondition_weight(preconditioner, thetas[static_cast<std::size_t>(p)]) * y(p);
  }
  return out;
}

void export_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& matrix) {
  std::string buf(kMagic, 8);
  put_u64(buf, static_cast<std::uint64_t>(matrix.rows()));
  put_u64(buf, static_cast<std::uint64_t>(matrix.cols()));
  const auto count = static_cast<std::size_t>(matrix.size());
  const std::size_t bytes = count * sizeof(std::complex<double>);
  const std::size_t offset = buf.size();
  buf.resize(offset + bytes);
  // std::complex<double> is layout-compatible with double[2] (re, im).
  std::memcpy(buf.data() + offset, matrix.data(), bytes);
  write_file_atomic(path, buf);
}

Eigen::MatrixXcd import_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  char magic[8];
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ParseError("not a spherecs matrix file");
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(out.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(std::complex<double>)));
  if (!in) throw ParseError("truncated matrix file");
  return out;
}

}  // namespace spherecs
