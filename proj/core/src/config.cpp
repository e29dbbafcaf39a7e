#include "spherecs/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace spherecs {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument("expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument("expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InvalidArgument("expected a number, got '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  const std::string v = lower(s);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("expected true or false, got '" + s + "'");
}

int to_int32(const std::string& s) {
  const long long v = to_int(s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw InvalidArgument("integer out of range: '" + s + "'");
  }
  return static_cast<int>(v);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment", [](auto& c, const auto& v) { c.kind = parse_experiment_kind(v); }},
      {"domain", [](auto& c, const auto& v) { c.domain = parse_domain(v); }},
      {"bandwidth", [](auto& c, const auto& v) { c.bandwidth = to_int32(v); }},
      {"m", [](auto& c, const auto& v) { c.m_grid = parse_int_grid(v); }},
      {"s", [](auto& c, const auto& v) { c.s_grid = parse_int_grid(v); }},
      {"patterns",
       [](auto& c, const auto& v) {
         c.patterns.clear();
         for (const auto& p : split(v, ',')) c.patterns.push_back(parse_pattern_family(p));
       }},
      {"trials", [](auto& c, const auto& v) { c.trials = to_int32(v); }},
      {"threshold", [](auto& c, const auto& v) { c.threshold = to_double(v); }},
      {"seed", [](auto& c, const auto& v) { c.seed = to_u64(v); }},
      {"solver", [](auto& c, const auto& v) { c.solver = parse_solver(v); }},
      {"precondition", [](auto& c, const auto& v) { c.precondition = lower(v); }},
      {"optimizer.initial_step", [](auto& c, const auto& v) { c.optimizer.initial_step = to_double(v); }},
      {"optimizer.decay", [](auto& c, const auto& v) { c.optimizer.decay = to_double(v); }},
      {"optimizer.max_iterations", [](auto& c, const auto& v) { c.optimizer.max_iterations = to_int32(v); }},
      {"optimizer.tolerance", [](auto& c, const auto& v) { c.optimizer.tolerance = to_double(v); }},
      {"optimizer.min_step", [](auto& c, const auto& v) { c.optimizer.min_step = to_double(v); }},
      {"optimizer.restarts", [](auto& c, const auto& v) { c.optimizer.restarts = to_int32(v); }},
      {"qcbp.max_iterations", [](auto& c, const auto& v) { c.qcbp.max_iterations = to_int32(v); }},
      {"qcbp.gap_tol", [](auto& c, const auto& v) { c.qcbp.gap_tol = to_double(v); }},
      {"qcbp.feas_tol", [](auto& c, const auto& v) { c.qcbp.feas_tol = to_double(v); }},
      {"igrf.table", [](auto& c, const auto& v) { c.igrf_table = v; }},
      {"igrf.sparsity", [](auto& c, const auto& v) { c.igrf_sparsity = static_cast<std::size_t>(to_u64(v)); }},
      {"igrf.grid_lat", [](auto& c, const auto& v) { c.grid_lat = to_int32(v); }},
      {"igrf.grid_lon", [](auto& c, const auto& v) { c.grid_lon = to_int32(v); }},
      {"forward.sparsity", [](auto& c, const auto& v) { c.forward_sparsity = static_cast<std::size_t>(to_u64(v)); }},
      {"forward.decay", [](auto& c, const auto& v) { c.forward_decay = to_double(v); }},
      {"forward.polarized", [](auto& c, const auto& v) { c.forward_polarized = to_bool(v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CoherenceCompare: return "coherence_compare";
    case ExperimentKind::OptimizePattern: return "optimize_pattern";
    case ExperimentKind::PhaseTransition: return "phase_transition";
    case ExperimentKind::IgrfDemo: return "igrf_demo";
    case ExperimentKind::WignerForwardDemo: return "wigner_forward_demo";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  const std::string s = lower(std::string(text));
  for (auto k : {ExperimentKind::CoherenceCompare, ExperimentKind::OptimizePattern,
                 ExperimentKind::PhaseTransition, ExperimentKind::IgrfDemo,
                 ExperimentKind::WignerForwardDemo}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("unknown experiment '" + std::string(text) + "'");
}

std::vector<int> parse_int_grid(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidArgument("empty grid");
  std::vector<int> out;
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw InvalidArgument("range grid must be start:stop:step, got '" + t + "'");
    const int a = to_int32(parts[0]);
    const int b = to_int32(parts[1]);
    const int step = to_int32(parts[2]);
    if (step <= 0 || b < a) throw InvalidArgument("range grid needs step > 0 and stop >= start");
    for (long long v = a; v <= b; v += step) out.push_back(static_cast<int>(v));
    return out;
  }
  for (const auto& p : split(t, ',')) out.push_back(to_int32(p));
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& what) {
    throw ConfigError("key '" + key + "': " + what);
  };
  if (bandwidth < 2) fail("bandwidth", "must be >= 2");
  if (m_grid.empty()) fail("m", "empty grid");
  for (int m : m_grid) {
    if (m < 2) fail("m", "sample counts must be >= 2");
  }
  const auto n = static_cast<int>(basis_dimension(domain, bandwidth));
  if (kind == ExperimentKind::PhaseTransition) {
    if (s_grid.empty()) fail("s", "empty grid");
    for (int s : s_grid) {
      if (s < 0 || s > n) fail("s", "sparsities must lie in [0, N]");
    }
  }
  if (patterns.empty()) fail("patterns", "no pattern families");
  if (trials < 1) fail("trials", "must be >= 1");
  if (!(threshold > 0.0)) fail("threshold", "must be positive");
  if (precondition != "none" && precondition != "sinsqrt" && precondition != "tan13" && precondition != "auto") {
    fail("precondition", "expected none, sinsqrt, tan13 or auto");
  }
  try {
    optimizer.validate();
  } catch (const InvalidArgument& e) {
    fail("optimizer", e.what());
  }
  if (qcbp.max_iterations < 1) fail("qcbp.max_iterations", "must be >= 1");
  if (!(qcbp.gap_tol > 0.0)) fail("qcbp.gap_tol", "must be positive");
  if (!(qcbp.feas_tol > 0.0)) fail("qcbp.feas_tol", "must be positive");
  if (grid_lat < 2 || grid_lon < 1) fail("igrf.grid_lat", "grid needs >= 2 latitudes and >= 1 longitude");
  if (forward_decay < 0.0 || forward_decay >= 1.0) fail("forward.decay", "must lie in [0, 1)");
  if (kind == ExperimentKind::IgrfDemo && domain != Domain::S2) fail("domain", "igrf_demo runs on S2");
  if (kind == ExperimentKind::IgrfDemo && igrf_table.empty() &&
      igrf_sparsity > static_cast<std::size_t>(bandwidth * bandwidth - 1)) {
    fail("igrf.sparsity", "exceeds B^2 - 1");
  }
  if (kind == ExperimentKind::WignerForwardDemo) {
    if (!forward_polarized && domain != Domain::SO3) {
      fail("domain", "wigner_forward_demo needs SO3 patterns unless forward.polarized = true");
    }
    const auto rn = static_cast<std::size_t>(2 * (bandwidth * bandwidth - 1));
    if (forward_decay == 0.0 && (forward_sparsity < 1 || forward_sparsity > rn)) {
      fail("forward.sparsity", "must lie in [1, " + std::to_string(rn) + "]");
    }
  }
}

ExperimentConfig parse_config(const std::string& text, std::optional<ExperimentKind> expected) {
  ExperimentConfig cfg;
  if (expected) cfg.kind = *expected;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "'", line_no);
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw ConfigError("key '" + key + "' repeats line " + std::to_string(prev->second), line_no);
    }
    seen[key] = line_no;
    try {
      it->second(cfg, value);
    } catch (const InvalidArgument& e) {
      throw ConfigError("key '" + key + "': " + e.what(), line_no);
    }
    if (key == "experiment" && expected && cfg.kind != *expected) {
      throw ConfigError("config is for '" + std::string(to_string(cfg.kind)) + "', not '" +
                            std::string(to_string(*expected)) + "'",
                        line_no);
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Point at the key's line when the message names one that appeared in the file.
    // A group name such as 'optimizer' falls back to the first of its keys in the file.
    const std::string what = e.what();
    if (what.rfind("key '", 0) != 0) throw;
    const std::string name = what.substr(5, what.find('\'', 5) - 5);
    if (const auto hit = seen.find(name); hit != seen.end()) throw ConfigError(what, hit->second);
    int first = 0;
    for (const auto& [key, line] : seen) {
      if (key.rfind(name + ".", 0) == 0 && (first == 0 || line < first)) first = line;
    }
    if (first > 0) throw ConfigError(what, first);
    throw;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), expected);
}

std::string format_config(const ExperimentConfig& c) {
  const std::function<std::string(const int&)> itos = [](const int& v) { return std::to_string(v); };
  const std::function<std::string(const PatternFamily&)> ftos = [](const PatternFamily& f) {
    return std::string(to_string(f));
  };
  std::ostringstream out;
  out << "experiment = " << to_string(c.kind) << '\n'
      << "domain = " << to_string(c.domain) << '\n'
      << "bandwidth = " << c.bandwidth << '\n'
      << "m = " << join(c.m_grid, itos) << '\n'
      << "s = " << join(c.s_grid, itos) << '\n'
      << "patterns = " << join(c.patterns, ftos) << '\n'
      << "trials = " << c.trials << '\n'
      << "threshold = " << fmt(c.threshold) << '\n'
      << "seed = " << c.seed << '\n'
      << "solver = " << to_string(c.solver) << '\n'
      << "precondition = " << c.precondition << '\n'
      << "optimizer.initial_step = " << fmt(c.optimizer.initial_step) << '\n'
      << "optimizer.decay = " << fmt(c.optimizer.decay) << '\n'
      << "optimizer.max_iterations = " << c.optimizer.max_iterations << '\n'
      << "optimizer.tolerance = " << fmt(c.optimizer.tolerance) << '\n'
      << "optimizer.min_step = " << fmt(c.optimizer.min_step) << '\n'
      << "optimizer.restarts = " << c.optimizer.restarts << '\n'
      << "qcbp.max_iterations = " << c.qcbp.max_iterations << '\n'
      << "qcbp.gap_tol = " << fmt(c.qcbp.gap_tol) << '\n'
      << "qcbp.feas_tol = " << fmt(c.qcbp.feas_tol) << '\n'
      << "igrf.table = " << c.igrf_table << '\n'
      << "igrf.sparsity = " << c.igrf_sparsity << '\n'
      << "igrf.grid_lat = " << c.grid_lat << '\n'
      << "igrf.grid_lon = " << c.grid_lon << '\n'
      << "forward.sparsity = " << c.forward_sparsity << '\n'
      << "forward.decay = " << fmt(c.forward_decay) << '\n'
      << "forward.polarized = " << (c.forward_polarized ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace spherecs
