#include "spherecs/pattern_io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spherecs/error.hpp"

namespace spherecs {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

void write_pattern(std::ostream& out, const SamplingPattern& pattern) {
  const Provenance& prov = pattern.provenance();
  out << "# spherecs-pattern 1\n";
  out << "# domain: " << to_string(pattern.domain()) << '\n';
  if (!prov.generator.empty()) out << "# generator: " << prov.generator << '\n';
  out << "# seed: " << prov.seed << '\n';
  for (const auto& [k, v] : prov.params) out << "# param " << k << '=' << v << '\n';
  for (const auto& w : prov.warnings) out << "# warning: " << w << '\n';

  char buf[96];
  for (const auto& p : pattern.points()) {
    if (pattern.domain() == Domain::S2) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.theta, p.phi);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.theta, p.phi, p.chi);
    }
    out << buf;
  }
}

SamplingPattern read_pattern(std::istream& in) {
  Provenance prov;
  bool have_domain = false;
  Domain domain = Domain::S2;
  std::vector<SamplePoint> pts;
  int columns = 0;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string body = trim(t.substr(1));
      try {
        if (starts_with(body, "domain:")) {
          domain = parse_domain(trim(body.substr(7)));
          have_domain = true;
        } else if (starts_with(body, "generator:")) {
          prov.generator = trim(body.substr(10));
        } else if (starts_with(body, "seed:")) {
          prov.seed = std::stoull(trim(body.substr(5)));
        } else if (starts_with(body, "param ")) {
          const std::string kv = trim(body.substr(6));
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw ParseError("malformed param header", line_no);
          prov.set_param(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (starts_with(body, "warning:")) {
          prov.warnings.push_back(trim(body.substr(8)));
        }
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(e.what(), line_no);
      }
      continue;
    }

    std::istringstream ls(t);
    double v[4];
    int n = 0;
    while (n < 4 && ls >> v[n]) ++n;
    if (!ls.eof() || n < 2 || n > 3) throw ParseError("expected 2 or 3 angles per line", line_no);
    if (columns == 0) columns = n;
    if (n != columns) throw ParseError("inconsistent column count", line_no);
    pts.push_back({v[0], v[1], n == 3 ? v[2] : 0.0});
  }
  if (pts.empty()) throw ParseError("pattern file has no points");
  if (!have_domain) domain = columns == 3 ? Domain::SO3 : Domain::S2;
  if ((domain == Domain::SO3) != (columns == 3)) {
    throw ParseError("column count does not match the declared domain");
  }
  try {
    return SamplingPattern(domain, std::move(pts), std::move(prov));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

void save_pattern(const std::filesystem::path& path, const SamplingPattern& pattern) {
  std::ostringstream out;
  write_pattern(out, pattern);
  write_file_atomic(path, out.str());
}

SamplingPattern load_pattern(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pattern file " + path.string());
  return read_pattern(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace spherecs
