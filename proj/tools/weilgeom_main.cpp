#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weil/descriptors.hpp"
#include "weil/errors.hpp"
#include "weil/suite.hpp"

namespace {

// --config accepts either an inline JSON object or a path to one.
std::string read_config_text(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    return arg;
  }
  std::ifstream in(arg);
  if (!in) {
    throw weil::ConfigError("cannot read config file '" + arg + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::uint64_t env_default_seed() {
  const char* env = std::getenv("WEILGEOM_SEED");
  if (env == nullptr || *env == '\0') {
    return 42;
  }
  char* end = nullptr;
  errno = 0;
  unsigned long long value = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0') {
    throw weil::ConfigError("WEILGEOM_SEED must be a non-negative integer");
  }
  return value;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity checks for prolonged geometry over truncated algebras",
               "weilgeom"};
  app.require_subcommand(1);

  CLI::App* check = app.add_subcommand("check", "Run identity check suites");
  std::string config_arg;
  std::string algebra_arg;
  std::string geometry_arg;
  std::string report_arg;
  std::string out_path;
  std::vector<std::string> suite_args;
  int samples = 0;
  double tol = 0.0;
  double zero_tol = 0.0;
  std::uint64_t seed = 0;

  check->add_option("--config", config_arg,
                    "JSON config: inline object or file path");
  check->add_option("--algebra", algebra_arg,
                    "Algebra descriptor: JSON or dual | jet(r,k) | "
                    "hyperdual(r) | tensor(a,b,...)");
  check->add_option("--geometry", geometry_arg,
                    "Geometry descriptor: JSON or preset name");
  check->add_option("--suite", suite_args,
                    "Suites to run (repeatable): algebra, lift, bracket, "
                    "connection, torsion, metric, all");
  auto* samples_opt =
      check->add_option("--samples", samples, "Random samples per check");
  auto* tol_opt =
      check->add_option("--tol", tol, "Tolerance for derived identities");
  auto* zero_tol_opt = check->add_option(
      "--zero-tol", zero_tol, "Threshold below which scalar parts count as 0");
  auto* seed_opt = check->add_option("--seed", seed, "RNG seed");
  auto* report_opt =
      check->add_option("--report", report_arg, "Report format: text or json");
  check->add_option("--out", out_path,
                    "Write the report to this file instead of stdout");

  CLI::App* checks_cmd =
      app.add_subcommand("checks", "List the check catalog and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (checks_cmd->parsed()) {
      for (const weil::CheckInfo& info : weil::list_checks()) {
        std::cout << weil::suite_name(info.suite) << "  " << info.name << "  "
                  << info.anchor << "\n";
      }
      return 0;
    }

    nlohmann::json config_json = nlohmann::json::object();
    if (!config_arg.empty()) {
      try {
        config_json = nlohmann::json::parse(read_config_text(config_arg));
      } catch (const nlohmann::json::parse_error& err) {
        throw weil::ConfigError(std::string("config is not valid JSON: ") +
                                err.what());
      }
      if (!config_json.is_object()) {
        throw weil::ConfigError("config must be a JSON object");
      }
    }

    // Command-line options override config file entries.
    if (!algebra_arg.empty()) {
      config_json["algebra"] = weil::parse_algebra_arg(algebra_arg);
    }
    if (!geometry_arg.empty()) {
      config_json["geometry"] = weil::parse_geometry_arg(geometry_arg);
    }
    if (!suite_args.empty()) {
      config_json["suites"] = suite_args;
    }
    if (samples_opt->count() > 0) {
      config_json["samples"] = samples;
    }
    if (tol_opt->count() > 0) {
      config_json["tol"] = tol;
    }
    if (zero_tol_opt->count() > 0) {
      config_json["zero_tol"] = zero_tol;
    }
    if (seed_opt->count() > 0) {
      config_json["seed"] = seed;
    }
    if (report_opt->count() > 0) {
      config_json["report"] = report_arg;
    }

    weil::SuiteConfig cfg = weil::parse_config(config_json, env_default_seed());
    weil::SuiteReport report = weil::run_suites(cfg);

    std::string payload;
    if (cfg.report == "json") {
      payload = weil::report_json(report).dump(2) + "\n";
    } else {
      payload = weil::report_text(report);
    }
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        throw weil::ConfigError("cannot write report to '" + out_path + "'");
      }
      out << payload;
    } else {
      std::cout << payload;
    }
    return report.all_ok() ? 0 : 1;
  } catch (const weil::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}
