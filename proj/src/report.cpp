#include "dirac/report.hpp"

#include "dirac/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

namespace dirac {

using nlohmann::ordered_json;

namespace {

constexpr double kQuadratureGapTol = 1e-12;

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

PointReport analyze_point(const Scenario& s, std::size_t index, const Vector& m) {
  PointReport p;
  p.index = index;
  p.point = m;
  const double tol = s.tolerances.rank_tol;
  try {
    p.ranks = rank_row(s.dirac, s.action, m, tol);
    p.stratum_dirac = restrict_to_stratum(s.dirac, s.action, m, tol).dirac.space();
    p.isotropy_route = reduce_isotropy_route(s.dirac, s.action, m, tol);
    p.orbit_route = reduce_orbit_route(s.dirac, s.action, m, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AmbiguousIsotropy && e.kind() != ErrorKind::DegeneratePoint) throw;
    PointReport skipped;
    skipped.index = index;
    skipped.point = m;
    skipped.status = PointStatus::Skipped;
    skipped.skip_reason = e.what();
    return skipped;
  }
  p.comparison = compare_routes(*p.isotropy_route, *p.orbit_route, s.tolerances.agree_tol);

  const Matrix exact = average_projector(p.ranks->isotropy, s.action);
  const int nodes = s.quadrature_nodes.value_or(default_quadrature_nodes(s.action, 1));
  p.quadrature_gap = (exact - average_projector_quadrature(p.ranks->isotropy, s.action, nodes)).cwiseAbs().maxCoeff();

  if (!p.isotropy_route->lagrangian) p.problems.emplace_back("isotropy route is not Lagrangian");
  if (!p.orbit_route->lagrangian) p.problems.emplace_back("orbit route is not Lagrangian");
  if (!p.comparison.agree) p.problems.emplace_back("routes disagree");
  if (!p.ranks->iq_identity) p.problems.emplace_back("I_q dimension identity fails");
  if (p.quadrature_gap > kQuadratureGapTol) p.problems.emplace_back("quadrature average differs from exact average");
  p.status = p.problems.empty() ? PointStatus::Pass : PointStatus::Fail;
  return p;
}

std::vector<PointReport> analyze_points(const Scenario& s, const std::vector<Vector>& samples, unsigned threads) {
  std::vector<PointReport> out(samples.size());
  std::vector<std::exception_ptr> errors(samples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < samples.size(); i = next++) {
      try {
        out[i] = analyze_point(s, i, samples[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(samples.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  // First error in input order, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double rounded(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

ordered_json vector_json(const Vector& v, bool round) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(round ? rounded(v(i)) : v(i));
  return out;
}

ordered_json subspace_json(const Subspace& s) {
  ordered_json out;
  out["ambient_dim"] = s.ambient_dim();
  out["dim"] = s.dim();
  ordered_json basis = ordered_json::array();
  for (Index k = 0; k < s.dim(); ++k) basis.push_back(vector_json(s.basis().col(k), true));
  out["basis"] = std::move(basis);
  return out;
}

ordered_json reduction_json(const Reduction& r) {
  ordered_json out;
  out["quotient_dim"] = r.model.dim();
  out["total_dim"] = r.model.total.dim();
  out["vertical_dim"] = r.model.vertical.dim();
  out["lagrangian"] = r.lagrangian;
  out["space"] = subspace_json(r.space);
  return out;
}

ordered_json closure_json(const ClosureReport& c) {
  ordered_json out;
  out["pass"] = c.pass;
  out["checks"] = c.checks;
  out["max_residual"] = c.max_residual;
  ordered_json failures = ordered_json::array();
  for (const auto& f : c.failures) {
    ordered_json j;
    j["label"] = f.label;
    j["point"] = f.point;
    j["residual"] = f.residual;
    failures.push_back(std::move(j));
  }
  out["failures"] = std::move(failures);
  return out;
}

std::string format_point(const std::vector<double>& p) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", p[i]);
    out += (i ? ", " : "") + std::string(buf);
  }
  return out + ")";
}

std::string format_point(const Vector& v) { return format_point(as_std(v)); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string verdict_line(const char* name, const ClosureReport& c, bool xi) {
  std::string line = std::string(name) + ": ";
  if (c.pass) return line + "PASS (" + std::to_string(c.checks) + " checks)";
  const auto& f = c.failures.front();
  std::string label = xi ? "ξ=1" : f.label;
  return line + "FAIL (" + label + ", point " + format_point(f.point) + ", residual " + sci(f.residual) + ")";
}

}  // namespace

std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Pass: return "pass";
    case PointStatus::Fail: return "fail";
    case PointStatus::Skipped: return "skipped";
    case PointStatus::NotApplicable: return "not_applicable";
  }
  return "?";
}

unsigned effective_threads(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("DIRAC_REDUCE_THREADS")) {
    char* end = nullptr;
    const unsigned long c = std::strtoul(cap, &end, 10);
    if (end != cap && *end == '\0' && c > 0) n = std::min<unsigned>(n, static_cast<unsigned>(c));
  }
  return n;
}

RunReport run_scenario(const Scenario& s, const RunOptions& options) {
  const std::vector<Vector> samples = sample_points(s);
  RunReport r{s, analyze_points(s, samples, effective_threads(options.threads)), {}, {}, {}, {}, {}};

  std::vector<std::optional<RankRow>> rows;
  std::vector<Vector> usable;
  for (const auto& p : r.points) {
    rows.push_back(p.ranks);
    if (p.status != PointStatus::Skipped) usable.push_back(p.point);
  }
  r.classes = rank_classes(rows);

  const double tol = s.tolerances.rank_tol;
  // Closure residuals are section-sized; sqrt(rank_tol) keeps round-off in
  // evaluating the graph from reading as a bracket failure.
  const double closure_tol = std::sqrt(tol);
  r.integrability = integrability_check(s.dirac, usable, closure_tol);
  r.infinitesimal_invariance = infinitesimal_invariance(s.dirac, s.action, usable, closure_tol);
  r.finite_invariance = finite_invariance(s.dirac, s.action, usable, closure_tol);

  const bool invariant = r.infinitesimal_invariance.pass && r.finite_invariance.pass;
  for (const auto& cls : r.classes) {
    if (invariant && cls.constant()) continue;
    for (std::size_t i : cls.members) r.points[i].status = PointStatus::NotApplicable;
  }
  r.summary = summarize(r);
  return r;
}

RunSummary summarize(const RunReport& r) {
  RunSummary s;
  s.points = r.points.size();
  for (const auto& p : r.points) {
    switch (p.status) {
      case PointStatus::Pass: ++s.passed; break;
      case PointStatus::Fail: ++s.failed; break;
      case PointStatus::Skipped: ++s.skipped; break;
      case PointStatus::NotApplicable: ++s.not_applicable; break;
    }
    if (p.status == PointStatus::Pass || p.status == PointStatus::Fail) {
      s.max_distance = std::max(s.max_distance, p.comparison.distance);
    }
  }
  s.integrability = r.integrability.pass;
  s.infinitesimal_invariance = r.infinitesimal_invariance.pass;
  s.finite_invariance = r.finite_invariance.pass;
  s.rank_constancy = std::all_of(r.classes.begin(), r.classes.end(), [](const RankClass& c) { return c.constant(); });
  s.failures = s.failed + (s.integrability ? 0 : 1) + (s.infinitesimal_invariance ? 0 : 1) +
               (s.finite_invariance ? 0 : 1);
  return s;
}

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "text") return ReportFormat::Text;
  throw Error(ErrorKind::UnknownFormat, "unknown format '" + std::string(name) + "' (expected json or text)");
}

ordered_json report_to_json(const RunReport& r) {
  ordered_json out;
  out["version"] = kScenarioVersion;
  out["scenario"] = scenario_to_json(r.scenario);

  ordered_json points = ordered_json::array();
  for (const auto& p : r.points) {
    ordered_json j;
    j["index"] = p.index;
    j["point"] = vector_json(p.point, false);
    j["status"] = to_string(p.status);
    if (p.status == PointStatus::Skipped) {
      j["reason"] = p.skip_reason;
      points.push_back(std::move(j));
      continue;
    }
    const RankRow& k = *p.ranks;
    j["isotropy"] = to_string(k.isotropy);
    ordered_json ranks;
    ranks["v"] = k.dim_v;
    ranks["v_ann"] = k.dim_v_ann;
    ranks["v_g_ann"] = k.dim_v_g_ann;
    ranks["t_g"] = k.dim_t_g;
    ranks["t"] = k.dim_t;
    ranks["d_k_perp"] = k.dim_d_k_perp;
    ranks["d_t_vg"] = k.dim_d_t_vg;
    ranks["d_tq_vg"] = k.dim_d_tq_vg;
    ranks["dq_kq_perp"] = k.dim_dq_kq_perp;
    j["ranks"] = std::move(ranks);
    j["iq_identity"] = k.iq_identity;
    j["stratum_dirac"] = subspace_json(*p.stratum_dirac);
    j["isotropy_route"] = reduction_json(*p.isotropy_route);
    j["orbit_route"] = reduction_json(*p.orbit_route);
    j["distance"] = rounded(p.comparison.distance);
    j["agree"] = p.comparison.agree;
    j["quadrature_gap"] = rounded(p.quadrature_gap);
    j["problems"] = p.problems;
    points.push_back(std::move(j));
  }
  out["points"] = std::move(points);

  ordered_json classes = ordered_json::array();
  for (const auto& c : r.classes) {
    ordered_json j;
    j["isotropy"] = to_string(c.isotropy);
    j["members"] = c.members;
    j["constant"] = {{"d_k_perp", c.constant_d_k_perp},
                     {"d_t_vg", c.constant_d_t_vg},
                     {"d_tq_vg", c.constant_d_tq_vg},
                     {"dq_kq_perp", c.constant_dq_kq_perp}};
    classes.push_back(std::move(j));
  }
  out["classes"] = std::move(classes);

  out["checks"]["integrability"] = closure_json(r.integrability);
  out["checks"]["infinitesimal_invariance"] = closure_json(r.infinitesimal_invariance);
  out["checks"]["finite_invariance"] = closure_json(r.finite_invariance);

  const RunSummary& s = r.summary;
  ordered_json sum;
  sum["points"] = s.points;
  sum["passed"] = s.passed;
  sum["failed"] = s.failed;
  sum["skipped"] = s.skipped;
  sum["not_applicable"] = s.not_applicable;
  sum["max_distance"] = rounded(s.max_distance);
  sum["integrability"] = s.integrability ? "pass" : "fail";
  sum["invariance"] = s.infinitesimal_invariance && s.finite_invariance ? "pass" : "fail";
  sum["rank_constancy"] = s.rank_constancy ? "constant" : "varies";
  sum["failures"] = s.failures;
  sum["caveat"] = "rank constancy is sampled evidence only";
  out["summary"] = std::move(sum);
  return out;
}

void emit_report(const RunReport& r, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::Json) {
    out << report_to_json(r).dump(2) << '\n';
    return;
  }
  const RunSummary& s = r.summary;
  out << "scenario: " << (r.scenario.name.empty() ? "(unnamed)" : r.scenario.name) << " (n=" << r.scenario.n
      << ", " << r.scenario.dirac.kind() << ")\n";
  out << verdict_line("integrability", r.integrability, false) << '\n';
  out << verdict_line("invariance", r.infinitesimal_invariance, true) << '\n';
  out << verdict_line("finite invariance", r.finite_invariance, false) << '\n';
  out << "rank constancy: " << (s.rank_constancy ? "constant" : "VARIES") << " (sampled evidence only)\n";
  out << '\n';
  int width = 24;  // point column grows to the widest point
  for (const auto& p : r.points) width = std::max(width, static_cast<int>(format_point(p.point).size()));
  char line[512];
  std::snprintf(line, sizeof line, "%5s  %-14s  %-*s  %4s  %4s  %4s  %10s\n", "#", "status", width, "point", "DnK",
                "DnT", "DqKq", "distance");
  out << line;
  for (const auto& p : r.points) {
    if (p.status == PointStatus::Skipped) {
      std::snprintf(line, sizeof line, "%5zu  %-14s  %-*s  %s\n", p.index, "skipped", width, format_point(p.point).c_str(),
                    p.skip_reason.c_str());
    } else {
      std::snprintf(line, sizeof line, "%5zu  %-14s  %-*s  %4ld  %4ld  %4ld  %10.3e\n", p.index,
                    std::string(to_string(p.status)).c_str(), width, format_point(p.point).c_str(),
                    static_cast<long>(p.ranks->dim_d_k_perp), static_cast<long>(p.ranks->dim_d_t_vg),
                    static_cast<long>(p.ranks->dim_dq_kq_perp), p.comparison.distance);
    }
    out << line;
  }
  out << '\n';
  out << "points: " << s.points << "  passed: " << s.passed << "  failed: " << s.failed << "  skipped: " << s.skipped
      << "  not applicable: " << s.not_applicable << '\n';
  out << "max distance: " << sci(s.max_distance) << '\n';
  out << "failures: " << s.failures << '\n';
}

}  // namespace dirac
