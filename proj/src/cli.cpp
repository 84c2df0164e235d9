#include "dirac/cli.hpp"

#include "dirac/error.hpp"
#include "dirac/report.hpp"

#include <CLI11.hpp>

#include <ostream>

namespace dirac {

namespace {

struct RunFlags {
  std::string file;
  std::optional<double> rank_tol;
  std::optional<double> agree_tol;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_nodes;
  std::string format = "json";
  unsigned threads = 0;
};

void apply_flags(Scenario& s, const RunFlags& f) {
  if (f.rank_tol) s.tolerances.rank_tol = *f.rank_tol;
  if (f.agree_tol) s.tolerances.agree_tol = *f.agree_tol;
  if ((f.samples || f.seed) && !s.samples.random) {
    RandomSamples r;
    r.box.assign(static_cast<std::size_t>(s.n), {-1.0, 1.0});
    s.samples.random = r;
  }
  if (f.samples) s.samples.random->count = *f.samples;
  if (f.seed) s.samples.random->seed = *f.seed;
  if (f.quad_nodes) s.quadrature_nodes = *f.quad_nodes;
  if (!(s.tolerances.rank_tol > 0) || !(s.tolerances.agree_tol > 0)) {
    throw Error(ErrorKind::Validation, "tolerances must be positive");
  }
  if (s.quadrature_nodes && *s.quadrature_nodes <= 0) {
    throw Error(ErrorKind::Validation, "--quad-nodes must be positive");
  }
}

int cmd_validate(const std::string& file, std::ostream& out) {
  const Scenario s = load_scenario(file);
  out << "ok: " << (s.name.empty() ? file : s.name) << " (n=" << s.n << ", " << s.dirac.kind()
      << ", |F|=" << s.action.finite.order();
  if (s.action.circle) {
    out << ", circle weights [";
    for (std::size_t i = 0; i < s.action.circle->weights.size(); ++i) {
      out << (i ? ", " : "") << s.action.circle->weights[i];
    }
    out << "]";
  }
  out << ", " << sample_points(s).size() << " samples)\n";
  return kExitPass;
}

int cmd_run(const RunFlags& f, std::ostream& out) {
  const ReportFormat format = parse_format(f.format);
  Scenario s = load_scenario(f.file);
  apply_flags(s, f);
  const RunReport r = run_scenario(s, {f.threads});
  emit_report(r, format, out);
  return r.exit_code() == 0 ? kExitPass : kExitFailure;
}

int cmd_bracket(const std::string& file, const std::string& format_name, std::ostream& out) {
  const ReportFormat format = parse_format(format_name);
  const auto doc = parse_json_text(read_text_file(file), file);
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() == 0) {
    throw Error(ErrorKind::Validation, "n: expected a positive integer");
  }
  const auto n = doc["n"].get<std::size_t>();
  for (const char* key : {"s1", "s2"}) {
    if (!doc.contains(key)) throw Error(ErrorKind::Validation, std::string("$: missing field '") + key + "'");
  }
  const PolySection s1 = parse_section(doc["s1"], n, "s1");
  const PolySection s2 = parse_section(doc["s2"], n, "s2");
  const Poly pair = pairing(s1, s2);
  const PolySection courant = courant_bracket(s1, s2);
  const PolySection dorfman = dorfman_bracket(s1, s2);
  if (format == ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["pairing"] = pair.to_string();
    j["courant"] = section_to_json(courant);
    j["dorfman"] = section_to_json(dorfman);
    out << j.dump(2) << '\n';
  } else {
    out << "pairing: " << pair.to_string() << '\n';
    out << "courant: X = " << to_string(courant.field) << ", alpha = " << to_string(courant.form) << '\n';
    out << "dorfman: X = " << to_string(dorfman.field) << ", alpha = " << to_string(dorfman.form) << '\n';
  }
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular reduction of Dirac structures under compact linear actions", "dirac-reduce"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Load and validate a scenario");
  validate->add_option("file", validate_file, "Scenario JSON")->required();

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Run both reduction routes over the scenario's samples");
  run->add_option("file", flags.file, "Scenario JSON")->required();
  run->add_option("--rank-tol", flags.rank_tol, "Relative rank tolerance");
  run->add_option("--agree-tol", flags.agree_tol, "Route agreement tolerance");
  run->add_option("--samples", flags.samples, "Number of random samples");
  run->add_option("--seed", flags.seed, "Random sample seed");
  run->add_option("--quad-nodes", flags.quad_nodes, "Circle quadrature nodes");
  run->add_option("--format", flags.format, "json or text")->capture_default_str();
  run->add_option("--threads", flags.threads, "Worker threads (0 = all cores)");

  std::string bracket_file;
  std::string bracket_format = "text";
  auto* bracket = app.add_subcommand("bracket", "Courant and Dorfman brackets of two sections");
  bracket->add_option("file", bracket_file, "JSON payload {n, s1, s2}")->required();
  bracket->add_option("--format", bracket_format, "json or text")->capture_default_str();

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*validate) return cmd_validate(validate_file, out);
    if (*run) return cmd_run(flags, out);
    return cmd_bracket(bracket_file, bracket_format, out);
  } catch (const Error& e) {
    err << "dirac-reduce: " << e.what() << '\n';
    return e.kind() == ErrorKind::InternalConsistency ? kExitInternal : kExitInput;
  } catch (const std::exception& e) {
    err << "dirac-reduce: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace dirac
