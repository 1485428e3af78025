#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "gaudin/experiment.hpp"
#include "gaudin/symgroup.hpp"

namespace py = pybind11;

namespace {

// JSON strings at the boundary: configs and reports stay byte-compatible
// with the CLI, and python gets plain json.loads-able text back.
py::tuple run_config(const std::string& config_json,
                     std::optional<unsigned> seed, std::optional<int> threads,
                     std::optional<std::string> precision,
                     std::optional<int> trunc) {
  const nlohmann::json config =
      nlohmann::json::parse(config_json, nullptr, false);
  if (config.is_discarded())
    throw py::value_error("config is not valid JSON");
  gaudin::RunOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  opts.precision = std::move(precision);
  opts.trunc = trunc;
  const gaudin::RunOutcome out = gaudin::run_experiment(config, opts);
  return py::make_tuple(out.exit_code, out.report.dump(), out.csv_files);
}

py::tuple replay(const std::string& report_json) {
  const nlohmann::json report =
      nlohmann::json::parse(report_json, nullptr, false);
  if (report.is_discarded())
    throw py::value_error("report is not valid JSON");
  std::string message;
  const int code = gaudin::replay_report(report, &message);
  return py::make_tuple(code, message);
}

}  // namespace

PYBIND11_MODULE(gaudinlab, m) {
  m.doc() =
      "Exact commuting-family experiments: run JSON configs, replay reports, "
      "and query the tableau-content combinatorics.";
  m.def("version", [] { return std::string(gaudin::kToolVersion); });
  m.def("run_config", &run_config, py::arg("config"), py::kw_only(),
        py::arg("seed") = std::nullopt, py::arg("threads") = std::nullopt,
        py::arg("precision") = std::nullopt, py::arg("trunc") = std::nullopt,
        "Run one experiment config (JSON string). Returns "
        "(exit_code, report_json, csv_files).");
  m.def("replay", &replay, py::arg("report"),
        "Re-run a report's config echo and verify it. Returns "
        "(exit_code, message).");
  m.def("expected_jm_tuples", &gaudin::expected_jm_tuples,
        py::arg("max_rows"), py::arg("n"),
        "Sorted union of standard-tableau content vectors over partitions "
        "of n with at most max_rows rows.");
  m.def(
      "syt_contents",
      [](const std::vector<int>& partition) {
        return gaudin::syt_contents(partition).contents;
      },
      py::arg("partition"),
      "Content vectors of the standard tableaux of one partition, sorted.");
}
