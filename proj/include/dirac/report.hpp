#pragma once

#include "dirac/reduce.hpp"
#include "dirac/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

enum class PointStatus { Pass, Fail, Skipped, NotApplicable };
std::string_view to_string(PointStatus s);

/// Everything computed at one sample point.
struct PointReport {
  std::size_t index = 0;
  Vector point;
  PointStatus status = PointStatus::Skipped;
  std::string skip_reason;

  std::optional<RankRow> ranks;
  std::optional<Subspace> stratum_dirac;  // D_Q in Fix(G_m) coordinates
  std::optional<Reduction> isotropy_route;
  std::optional<Reduction> orbit_route;
  Comparison comparison;
  double quadrature_gap = 0.0;  // |exact average - quadrature average|
  std::vector<std::string> problems;
};

struct RunSummary {
  std::size_t points = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::size_t not_applicable = 0;
  double max_distance = 0.0;  // over compared points
  bool integrability = true;
  bool infinitesimal_invariance = true;
  bool finite_invariance = true;
  bool rank_constancy = true;
  /// Failed points plus failed whole-scenario checks.
  std::size_t failures = 0;
};

struct RunReport {
  Scenario scenario;
  std::vector<PointReport> points;
  std::vector<RankClass> classes;
  ClosureReport integrability;
  ClosureReport infinitesimal_invariance;
  ClosureReport finite_invariance;
  RunSummary summary;

  int exit_code() const { return summary.failures == 0 ? 0 : 1; }
};

struct RunOptions {
  /// 0 = hardware concurrency. DIRAC_REDUCE_THREADS caps it either way.
  unsigned threads = 0;
};

/// Worker count after applying the DIRAC_REDUCE_THREADS cap.
unsigned effective_threads(unsigned requested);

/// Per-point work runs concurrently; results are merged in input order, so the
/// report does not depend on the thread count. InternalConsistency errors propagate.
RunReport run_scenario(const Scenario& s, const RunOptions& options = {});

/// Recomputes the summary from the entries and the whole-scenario checks.
RunSummary summarize(const RunReport& r);

enum class ReportFormat { Json, Text };
/// Throws UnknownFormat for anything but "json" or "text".
ReportFormat parse_format(std::string_view name);

nlohmann::ordered_json report_to_json(const RunReport& r);
void emit_report(const RunReport& r, ReportFormat format, std::ostream& out);

}  // namespace dirac
