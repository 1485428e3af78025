#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gaudin {

inline constexpr const char* kToolName = "gaudin-lab";
inline constexpr const char* kToolVersion = "0.1.0";

/// Raised on malformed configs; run_experiment converts it into an exit-1
/// error record, so callers only see it when validating by hand.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line overrides applied on top of the config fields. Every value
/// that is actually set here is echoed under "overrides" in the report so a
/// replay can reproduce the effective settings.
struct RunOptions {
  std::optional<unsigned> seed;
  std::optional<int> threads;
  std::optional<std::string> precision;  // "exact" | "f64"
  std::optional<int> trunc;
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 config error, 2 failed verdict, 3 indeterminate
  nlohmann::json report;
  // Spectrum tables as (file name, file body): "spectra.csv" when exactly one
  // case produced a spectrum, "spectra_case{i}.csv" otherwise.
  std::vector<std::pair<std::string, std::string>> csv_files;
};

/// Validates and runs one experiment config (see configs/ and the README for
/// the schema). Config problems produce exit code 1 with an error record in
/// `report`, never an exception; mathematical outcomes land in
/// report["verdicts"] as "pass" / "fail" / "indeterminate" per check.
RunOutcome run_experiment(const nlohmann::json& config,
                          const RunOptions& opts = {});

/// Reruns the config echoed in `report` with its recorded overrides and
/// compares: verdict fields must match exactly, numeric table entries to
/// 1e-12 relative; timings are ignored. Returns 0 on match, 2 on any
/// mismatch, 1 when the report is not replayable; details go to *message.
int replay_report(const nlohmann::json& report, std::string* message = nullptr);

}  // namespace gaudin
