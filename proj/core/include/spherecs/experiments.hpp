#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spherecs/config.hpp"

namespace spherecs {

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct ExperimentSummary {
  ExperimentKind kind = ExperimentKind::CoherenceCompare;
  std::vector<std::filesystem::path> files;
  std::vector<StageTiming> stages;
  std::vector<std::string> notes;

  std::string text() const;
};

/// Runs one configured experiment and writes its outputs under out_dir.
///
/// CSV files start with a `# schema: <columns>` line followed by the column header; they
/// hold no timing, so the same config yields byte-identical CSVs. Wall-clock per stage goes
/// to summary.txt. Each file is written atomically; if the run fails, files it already
/// wrote are removed before the exception propagates.
ExperimentSummary run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// "# schema: <first line of body>\n" + body
std::string csv_document(const std::string& body);

}  // namespace spherecs
