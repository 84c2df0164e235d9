#include "dirac/scenario.hpp"

#include "dirac/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace dirac {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::Validation, path + ": " + msg);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(ErrorKind::Parse, "cannot format number");
  return std::string(buf, end);
}

Rational rational_at(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.dump());
    if (j.is_number_float()) return parse_rational(shortest(j.get<double>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
  fail(path, "expected a number or a rational string");
}

double number_at(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  return rational_at(j, path).get_d();
}

Poly poly_at(const json& j, std::size_t n, const std::string& path) {
  if (j.is_number()) return Poly::constant(n, rational_at(j, path));
  if (!j.is_string()) fail(path, "expected a number or a polynomial string");
  try {
    return parse_poly(j.get<std::string>(), n);
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

std::vector<Poly> poly_list(const json& j, std::size_t n, const std::string& path) {
  require_array(j, path);
  if (j.size() != n) fail(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  std::vector<Poly> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(poly_at(j[i], n, path + "[" + std::to_string(i) + "]"));
  return out;
}

PolyMatrix poly_matrix(const json& j, std::size_t n, const std::string& path) {
  require_array(j, path);
  if (j.size() != n) fail(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  PolyMatrix out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(poly_list(j[i], n, path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_list(const json& j, std::size_t n, const std::string& path) {
  require_array(j, path);
  if (j.size() != n) fail(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix number_matrix(const json& j, std::size_t n, const std::string& path) {
  require_array(j, path);
  if (j.size() != n) fail(path, "expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  Matrix m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = number_list(j[i], n, path + "[" + std::to_string(i) + "]");
    for (std::size_t k = 0; k < n; ++k) m(static_cast<Index>(i), static_cast<Index>(k)) = row[k];
  }
  return m;
}

ordered_json poly_row(const std::vector<Poly>& row) {
  ordered_json out = ordered_json::array();
  for (const auto& p : row) out.push_back(p.to_string());
  return out;
}

ordered_json matrix_json(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

DiracFieldSpec parse_dirac(const json& j, std::size_t n, double tol, std::vector<std::vector<double>>& raw) {
  const std::string path = "dirac";
  if (!j.is_object()) fail(path, "expected an object");
  int kinds = 0;
  for (const char* k : {"bivector", "two_form", "distribution", "sections"}) kinds += j.contains(k) ? 1 : 0;
  if (kinds != 1) fail(path, "expected exactly one of bivector, two_form, distribution, sections");
  try {
    if (j.contains("bivector")) {
      return DiracFieldSpec(n, DiracFieldSpec::Bivector{poly_matrix(j["bivector"], n, path + ".bivector")}, tol);
    }
    if (j.contains("two_form")) {
      return DiracFieldSpec(n, DiracFieldSpec::TwoForm{{poly_matrix(j["two_form"], n, path + ".two_form")}}, tol);
    }
    if (j.contains("distribution")) {
      const json& vs = require_array(j["distribution"], path + ".distribution");
      std::vector<Vector> vectors;
      for (std::size_t k = 0; k < vs.size(); ++k) {
        auto v = number_list(vs[k], n, path + ".distribution[" + std::to_string(k) + "]");
        vectors.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Index>(n)));
        raw.push_back(std::move(v));
      }
      return DiracFieldSpec(n, DiracFieldSpec::Distribution{span(vectors, static_cast<Index>(n), tol)}, tol);
    }
    const json& ss = require_array(j["sections"], path + ".sections");
    DiracFieldSpec::Sections sections;
    for (std::size_t k = 0; k < ss.size(); ++k) {
      sections.sections.push_back(parse_section(ss[k], n, path + ".sections[" + std::to_string(k) + "]"));
    }
    sections.basepoint = number_list(require(j, "basepoint", path), n, path + ".basepoint");
    return DiracFieldSpec(n, std::move(sections), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Validation || e.kind() == ErrorKind::Parse) throw;
    throw Error(ErrorKind::Validation, path + ": " + e.what());
  }
}

ActionSpec parse_action(const json& j, std::size_t n, double tol) {
  const std::string path = "action";
  if (!j.is_object()) fail(path, "expected an object");
  ActionSpec a;
  a.n = static_cast<Index>(n);
  if (j.contains("finite")) {
    const json& fs = require_array(j["finite"], path + ".finite");
    for (std::size_t k = 0; k < fs.size(); ++k) {
      a.finite.elements.push_back(number_matrix(fs[k], n, path + ".finite[" + std::to_string(k) + "]"));
    }
  } else {
    a.finite = FiniteGroupRep::trivial(a.n);
  }
  if (j.contains("circle")) {
    const json& c = j["circle"];
    const json& ws = require_array(require(c, "weights", path + ".circle"), path + ".circle.weights");
    CircleFactor circle;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      if (!ws[k].is_number_integer()) fail(path + ".circle.weights[" + std::to_string(k) + "]", "expected an integer");
      circle.weights.push_back(ws[k].get<int>());
    }
    const long rotating = 2 * static_cast<long>(circle.weights.size());
    if (c.contains("fixed_dim")) {
      if (!c["fixed_dim"].is_number_unsigned()) fail(path + ".circle.fixed_dim", "expected a nonnegative integer");
      circle.fixed_dim = c["fixed_dim"].get<std::size_t>();
    } else {
      if (rotating > static_cast<long>(n)) fail(path + ".circle.weights", "more rotation blocks than dimensions");
      circle.fixed_dim = n - static_cast<std::size_t>(rotating);
    }
    a.circle = circle;
  }
  const auto violations = action_violations(a, tol);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
    fail(path, msg);
  }
  return a;
}

}  // namespace

PolySection parse_section(const json& j, std::size_t n, const std::string& path) {
  return {{poly_list(require(j, "X", path), n, path + ".X")},
          {poly_list(require(j, "alpha", path), n, path + ".alpha")}};
}

ordered_json section_to_json(const PolySection& s) {
  ordered_json out;
  out["X"] = poly_row(s.field.components);
  out["alpha"] = poly_row(s.form.components);
  return out;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("$", "scenario must be a JSON object");
  if (doc.contains("version")) {
    if (!doc["version"].is_string() || doc["version"].get<std::string>() != kScenarioVersion) {
      fail("version", std::string("unsupported version, expected \"") + kScenarioVersion + "\"");
    }
  }
  const json& nj = require(doc, "n", "$");
  if (!nj.is_number_unsigned() || nj.get<std::size_t>() == 0) fail("n", "expected a positive integer");
  const std::size_t n = nj.get<std::size_t>();

  Tolerances tol;
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    if (t.contains("rank_tol")) tol.rank_tol = number_at(t["rank_tol"], "tolerances.rank_tol");
    if (t.contains("agree_tol")) tol.agree_tol = number_at(t["agree_tol"], "tolerances.agree_tol");
    if (!(tol.rank_tol > 0) || !(tol.agree_tol > 0)) fail("tolerances", "tolerances must be positive");
  }

  std::vector<std::vector<double>> raw;
  DiracFieldSpec dirac = parse_dirac(require(doc, "dirac", "$"), n, tol.rank_tol, raw);
  ActionSpec action = doc.contains("action") ? parse_action(doc["action"], n, tol.rank_tol)
                                             : ActionSpec{static_cast<Index>(n), FiniteGroupRep::trivial(static_cast<Index>(n)), {}};

  SampleSpec samples;
  if (doc.contains("samples")) {
    const json& s = doc["samples"];
    if (!s.is_object()) fail("samples", "expected an object");
    if (s.contains("explicit")) {
      const json& pts = require_array(s["explicit"], "samples.explicit");
      for (std::size_t k = 0; k < pts.size(); ++k) {
        samples.explicit_points.push_back(number_list(pts[k], n, "samples.explicit[" + std::to_string(k) + "]"));
      }
    }
    if (s.contains("random")) {
      const json& r = s["random"];
      RandomSamples rs;
      const json& count = require(r, "count", "samples.random");
      if (!count.is_number_unsigned()) fail("samples.random.count", "expected a nonnegative integer");
      rs.count = count.get<std::size_t>();
      if (r.contains("seed")) {
        if (!r["seed"].is_number_unsigned()) fail("samples.random.seed", "expected a nonnegative integer");
        rs.seed = r["seed"].get<std::uint64_t>();
      }
      if (r.contains("box")) {
        const json& box = require_array(r["box"], "samples.random.box");
        if (box.size() != n) fail("samples.random.box", "expected " + std::to_string(n) + " intervals");
        for (std::size_t k = 0; k < n; ++k) {
          const auto iv = number_list(box[k], 2, "samples.random.box[" + std::to_string(k) + "]");
          if (iv[0] > iv[1]) fail("samples.random.box[" + std::to_string(k) + "]", "empty interval");
          rs.box.emplace_back(iv[0], iv[1]);
        }
      } else {
        rs.box.assign(n, {-1.0, 1.0});
      }
      samples.random = rs;
    }
  }

  std::optional<int> nodes;
  if (doc.contains("quadrature_nodes")) {
    const json& q = doc["quadrature_nodes"];
    if (!q.is_number_integer() || q.get<int>() <= 0) fail("quadrature_nodes", "expected a positive integer");
    nodes = q.get<int>();
  }
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name", "expected a string");
    name = doc["name"].get<std::string>();
  }
  return Scenario{std::move(name), static_cast<Index>(n), std::move(dirac), std::move(action), std::move(samples),
                  tol, nodes, std::move(raw)};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::Parse, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                      ": invalid JSON (" + e.what() + ")");
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(parse_json_text(read_text_file(path), path.string()));
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json out;
  out["version"] = kScenarioVersion;
  if (!s.name.empty()) out["name"] = s.name;
  out["n"] = s.n;

  ordered_json dirac;
  const auto& v = s.dirac.value();
  if (const auto* b = std::get_if<DiracFieldSpec::Bivector>(&v)) {
    ordered_json m = ordered_json::array();
    for (const auto& row : b->entries) m.push_back(poly_row(row));
    dirac["bivector"] = std::move(m);
  } else if (const auto* t = std::get_if<DiracFieldSpec::TwoForm>(&v)) {
    ordered_json m = ordered_json::array();
    for (const auto& row : t->omega.entries) m.push_back(poly_row(row));
    dirac["two_form"] = std::move(m);
  } else if (std::holds_alternative<DiracFieldSpec::Distribution>(v)) {
    dirac["distribution"] = s.distribution_vectors;
  } else {
    const auto& sec = std::get<DiracFieldSpec::Sections>(v);
    ordered_json list = ordered_json::array();
    for (const auto& x : sec.sections) list.push_back(section_to_json(x));
    dirac["sections"] = std::move(list);
    dirac["basepoint"] = sec.basepoint;
  }
  out["dirac"] = std::move(dirac);

  ordered_json action;
  ordered_json finite = ordered_json::array();
  for (const auto& g : s.action.finite.elements) finite.push_back(matrix_json(g));
  action["finite"] = std::move(finite);
  if (s.action.circle) {
    action["circle"]["weights"] = s.action.circle->weights;
    action["circle"]["fixed_dim"] = s.action.circle->fixed_dim;
  }
  out["action"] = std::move(action);

  ordered_json samples;
  samples["explicit"] = s.samples.explicit_points;
  if (s.samples.random) {
    const auto& r = *s.samples.random;
    samples["random"]["count"] = r.count;
    samples["random"]["seed"] = r.seed;
    ordered_json box = ordered_json::array();
    for (const auto& [lo, hi] : r.box) box.push_back({lo, hi});
    samples["random"]["box"] = std::move(box);
  }
  out["samples"] = std::move(samples);
  out["tolerances"]["rank_tol"] = s.tolerances.rank_tol;
  out["tolerances"]["agree_tol"] = s.tolerances.agree_tol;
  if (s.quadrature_nodes) out["quadrature_nodes"] = *s.quadrature_nodes;
  return out;
}

std::vector<Vector> sample_points(const Scenario& s) {
  std::vector<Vector> out;
  for (const auto& p : s.samples.explicit_points) {
    out.push_back(Eigen::Map<const Vector>(p.data(), static_cast<Index>(p.size())));
  }
  if (s.samples.random) {
    const auto& r = *s.samples.random;
    // mt19937_64 output is fixed by the standard; the unit-interval mapping is
    // done by hand so the points do not depend on the library's distributions.
    std::mt19937_64 rng(r.seed);
    for (std::size_t k = 0; k < r.count; ++k) {
      Vector p(s.n);
      for (Index i = 0; i < s.n; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto [lo, hi] = r.box[static_cast<std::size_t>(i)];
        p(i) = lo + (hi - lo) * u;
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace dirac
