#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gaudin/experiment.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::json;

Json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return Json::parse(in);
}

bool write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  return static_cast<bool>(out);
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const gaudin::RunOptions& opts) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message()
              << "\n";
    return 1;
  }
  const std::filesystem::path report_path =
      std::filesystem::path(out_dir) / "report.json";

  gaudin::RunOutcome out;
  try {
    out = gaudin::run_experiment(read_json(config_path), opts);
  } catch (const std::exception& e) {
    // Parse failures and unexpected throws still leave a JSON error record.
    out.exit_code = 1;
    out.report = Json{{"tool", gaudin::kToolName},
                      {"version", gaudin::kToolVersion},
                      {"error", e.what()}};
  }

  if (!write_file(report_path, out.report.dump(2) + "\n")) {
    std::cerr << "error: cannot write " << report_path.string() << "\n";
    return 1;
  }
  for (const auto& [name, body] : out.csv_files)
    if (!write_file(std::filesystem::path(out_dir) / name, body)) {
      std::cerr << "error: cannot write " << name << "\n";
      return 1;
    }

  if (out.report.contains("error"))
    std::cerr << "error: " << out.report.at("error").get<std::string>()
              << "\n";
  else
    for (const auto& [key, v] : out.report.at("verdicts").items())
      std::cout << key << ": " << v.get<std::string>() << "\n";
  std::cout << "report: " << report_path.string() << " (exit "
            << out.exit_code << ")\n";
  return out.exit_code;
}

int cmd_replay(const std::string& report_path) {
  Json report;
  try {
    report = read_json(report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::string message;
  const int code = gaudin::replay_report(report, &message);
  (code == 0 ? std::cout : std::cerr) << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch runner for commuting-family experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gaudin::kToolVersion));

  std::string config_path, out_dir, report_path;
  gaudin::RunOptions opts;

  CLI::App* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config", config_path, "JSON config path")->required();
  run->add_option("--out", out_dir,
                  "Directory for report.json and CSV tables")
      ->required();
  run->add_option("--seed", opts.seed, "Override the config seed");
  run->add_option("--threads", opts.threads, "Override the worker count");
  run->add_option("--precision", opts.precision,
                  "Override precision: exact | f64");
  run->add_option("--trunc", opts.trunc,
                  "Override the series truncation window");

  CLI::App* replay =
      app.add_subcommand("replay", "Re-run a report's config and verify it");
  replay->add_option("--report", report_path, "report.json path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems map to exit 1
  }

  if (run->parsed()) return cmd_run(config_path, out_dir, opts);
  return cmd_replay(report_path);
}
