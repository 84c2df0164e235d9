#pragma once

#include "dirac/action.hpp"
#include "dirac/dirac_field.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

inline constexpr const char* kScenarioVersion = "dirac-reduce/1";

struct RandomSamples {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> box;  // per-coordinate [lo, hi]
};

struct SampleSpec {
  std::vector<std::vector<double>> explicit_points;
  std::optional<RandomSamples> random;
};

struct Tolerances {
  double rank_tol = 1e-9;
  double agree_tol = 1e-8;
};

/// A validated problem instance.
struct Scenario {
  std::string name;
  Index n = 0;
  DiracFieldSpec dirac;
  ActionSpec action;
  SampleSpec samples;
  Tolerances tolerances;
  std::optional<int> quadrature_nodes;
  /// Spanning vectors as given, for the distribution variant (echoed verbatim).
  std::vector<std::vector<double>> distribution_vectors;
};

/// Parses and validates. Errors carry the JSON path of the offending field.
Scenario parse_scenario(const nlohmann::json& doc);
/// Reads a file; parse errors report the line and column.
Scenario load_scenario(const std::filesystem::path& path);
/// Canonical JSON form; parse_scenario(scenario_to_json(s)) reproduces s.
nlohmann::ordered_json scenario_to_json(const Scenario& s);

/// Explicit points followed by the seeded random ones. Deterministic in the seed.
std::vector<Vector> sample_points(const Scenario& s);

/// Reads a whole file or throws a Parse error naming it.
std::string read_text_file(const std::filesystem::path& path);
/// Parses JSON text; syntax errors become Parse errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

/// One Pontryagin section {"X": [...], "alpha": [...]} with polynomial entries.
PolySection parse_section(const nlohmann::json& j, std::size_t n, const std::string& path);
nlohmann::ordered_json section_to_json(const PolySection& s);

}  // namespace dirac
