#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "spherecs/patterns.hpp"

namespace spherecs {

// Pattern text format (UTF-8):
//
//   # spherecs-pattern 1
//   # domain: S2
//   # generator: spiral
//   # seed: 0
//   # param m=10
//   # warning: <free text>
//   <theta> <phi>            one point per line on S2
//   <theta> <phi> <chi>      one point per line on SO3
//
// Angles are radians written with 17 significant digits, so a write/read cycle is exact.
// Unknown '#' lines are ignored; without a domain header the column count decides.

void write_pattern(std::ostream& out, const SamplingPattern& pattern);
SamplingPattern read_pattern(std::istream& in);

void save_pattern(const std::filesystem::path& path, const SamplingPattern& pattern);
SamplingPattern load_pattern(const std::filesystem::path& path);

/// Writes content to a sibling temporary file and renames it over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace spherecs
