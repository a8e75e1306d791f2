#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "weil/descriptors.hpp"
#include "weil/prolong.hpp"

namespace weil {

/// Deterministic uniform generator.  Doubles are produced from the top
/// 53 bits of a mersenne-twister word, so streams are identical across
/// standard libraries and platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t raw() { return state_(); }

  double unit() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  int uniform_int(int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  std::mt19937_64 state_;
};

std::uint64_t fnv1a(std::string_view text);

enum class SuiteId { Algebra, Lift, Bracket, Connection, Torsion, Metric };

std::string suite_name(SuiteId id);

/// Resolved harness configuration; parse_config fills defaults.
struct SuiteConfig {
  nlohmann::json algebra = nlohmann::json{{"kind", "dual"}};
  nlohmann::json geometry = nlohmann::json{{"preset", "euclid"}};
  std::vector<SuiteId> suites = {SuiteId::Algebra,    SuiteId::Lift,
                                 SuiteId::Bracket,    SuiteId::Connection,
                                 SuiteId::Torsion,    SuiteId::Metric};
  int samples = 100;
  double tol = 1e-9;
  double zero_tol = 1e-12;
  std::uint64_t seed = 42;
  std::string report = "text"; // "text" | "json"
  std::vector<std::string> expected_fail;
};

/// Parses a config object; unknown keys, unknown suite or check names,
/// and out-of-range values raise ConfigError.  `default_seed` applies
/// when the config carries no "seed" (the CLI passes the WEILGEOM_SEED
/// environment value through here).
SuiteConfig parse_config(const nlohmann::json& config,
                         std::uint64_t default_seed = 42);
SuiteConfig parse_config_text(const std::string& text,
                              std::uint64_t default_seed = 42);

/// Canonical echo: parse_config(resolved_config_json(c)) reproduces c.
nlohmann::json resolved_config_json(const SuiteConfig& config);

struct CheckResult {
  std::string name;
  std::string anchor;
  int samples = 0;
  double max_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool expected_fail = false;
};

struct SuiteReport {
  nlohmann::json env;
  std::vector<CheckResult> checks;

  /// True when every check passed, counting an expected failure that
  /// did fail as success and one that passed as failure.
  bool all_ok() const;
};

/// Runs every selected check with per-check seeded randomness and
/// returns results sorted by check name.  Identical configs give
/// byte-identical reports.
SuiteReport run_suites(const SuiteConfig& config);

std::string report_text(const SuiteReport& report);
nlohmann::json report_json(const SuiteReport& report);

/// Everything needed to run one check outside run_suites.
struct CheckEnv {
  AlgebraPtr algebra;
  const GeometrySetup* geometry = nullptr;
  int samples = 100;
  double tol = 1e-9;
  double zero_tol = 1e-12;
  std::uint64_t seed = 42;
};

struct CheckInfo {
  std::string name;
  std::string anchor;
  SuiteId suite;
};

std::vector<CheckInfo> list_checks();

/// Runs one catalog check by name (ConfigError if unknown).
CheckResult run_single_check(const std::string& name, const CheckEnv& env);

// Samplers shared by the harness and the acceptance suite.  All draw
// from the caller's generator only, so streams stay reproducible.

/// Uniform point of the geometry's box satisfying the chart guard;
/// throws DomainExhaustedError after 1000 rejected draws.
std::vector<double> sample_base_point(const GeometrySetup& geo, Rng& rng);

/// In-domain base point with every nilpotent coordinate coefficient
/// uniform in [-1, 1].
APoint sample_near_point(const AlgebraPtr& algebra, const GeometrySetup& geo,
                         Rng& rng);

/// Random polynomial/trig expression in dim variables (no division, so
/// evaluation is total).
Expr random_smooth_expr(Rng& rng, int dim, int depth);

VectorField random_vector_field(Rng& rng, int dim, int depth = 2);

/// Coefficients uniform in [-1, 1].
AElement random_a_element(const AlgebraPtr& algebra, Rng& rng);

/// Random two-term combination sum_j a_j (h_j)^A.
ALiftFunction random_lift_function(const AlgebraPtr& algebra, Rng& rng,
                                   int dim);

AVectorField random_a_vector_field(const AlgebraPtr& algebra, Rng& rng,
                                   int dim);

} // namespace weil
