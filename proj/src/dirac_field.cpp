#include "dirac/dirac_field.hpp"

#include "dirac/error.hpp"

#include <algorithm>
#include <sstream>

namespace dirac {

namespace {

void check_square(const PolyMatrix& m, std::size_t n, const char* what) {
  if (m.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": " + std::to_string(m.size()) +
                                                  " rows, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": row " + std::to_string(i) +
                                                    " has " + std::to_string(m[i].size()) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j].n_vars() != n) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + "[" + std::to_string(i) + "][" +
                                                      std::to_string(j) + "] is in " +
                                                      std::to_string(m[i][j].n_vars()) + " variables");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (!(m[i][j] == -m[j][i])) {
        throw Error(ErrorKind::NotAntisymmetric,
                    std::string(what) + "[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
                        m[i][j].to_string() + " but [" + std::to_string(j) + "][" + std::to_string(i) +
                        "] = " + m[j][i].to_string());
      }
    }
  }
}

Matrix evaluate_matrix(const PolyMatrix& m, std::span<const double> point) {
  const auto n = static_cast<Index>(m.size());
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = m[i][j].evaluate(point);
  }
  return out;
}

PolySection constant_section(const Vector& tangent, const Vector& covector) {
  const auto n = static_cast<std::size_t>(tangent.size());
  PolySection s = PolySection::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.field.components[i] = Poly::constant(n, rational_from_double(tangent(static_cast<Index>(i))));
    s.form.components[i] = Poly::constant(n, rational_from_double(covector(static_cast<Index>(i))));
  }
  return s;
}

LinearDirac evaluate_sections(const std::vector<PolySection>& sections, std::size_t n,
                              std::span<const double> point, double tol) {
  Matrix values(static_cast<Index>(2 * n), static_cast<Index>(sections.size()));
  for (std::size_t k = 0; k < sections.size(); ++k) values.col(static_cast<Index>(k)) = sections[k].evaluate(point);
  Subspace space = Subspace::from_columns(values, tol);
  if (space.dim() != static_cast<Index>(n)) {
    std::ostringstream msg;
    msg << "generating sections span a " << space.dim() << "-dimensional space at (";
    for (std::size_t i = 0; i < point.size(); ++i) msg << (i ? ", " : "") << point[i];
    msg << "), expected " << n;
    throw Error(ErrorKind::DegeneratePoint, msg.str());
  }
  return LinearDirac(std::move(space));
}

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// Checks that each section value lies in D at each sample.
void check_closure(const DiracFieldSpec& spec, const std::vector<std::pair<std::string, PolySection>>& values,
                   const std::vector<Vector>& samples, double tol, ClosureReport& report) {
  for (const auto& m : samples) {
    const LinearDirac d = evaluate(spec, m);
    for (const auto& [label, section] : values) {
      const Vector v = section.evaluate(as_span(m));
      const double r = d.space().residual(v);
      ++report.checks;
      report.max_residual = std::max(report.max_residual, r);
      if (r > tol * std::max(1.0, v.norm())) {
        report.pass = false;
        report.failures.push_back({label, as_std(m), r});
      }
    }
  }
}

}  // namespace

DiracFieldSpec::DiracFieldSpec(std::size_t n, Variant value, double tol)
    : n_(n), value_(std::move(value)), tol_(tol) {
  if (n_ == 0) throw Error(ErrorKind::Validation, "Dirac field on R^0");
  if (const auto* b = std::get_if<Bivector>(&value_)) {
    check_square(b->entries, n_, "bivector");
  } else if (const auto* t = std::get_if<TwoForm>(&value_)) {
    check_square(t->omega.entries, n_, "two_form");
  } else if (const auto* d = std::get_if<Distribution>(&value_)) {
    if (d->delta.ambient_dim() != static_cast<Index>(n_)) {
      throw Error(ErrorKind::DimensionMismatch, "distribution lives in R^" +
                                                    std::to_string(d->delta.ambient_dim()) +
                                                    ", expected R^" + std::to_string(n_));
    }
  } else {
    const auto& s = std::get<Sections>(value_);
    if (s.sections.size() != n_) {
      throw Error(ErrorKind::Validation, "sections: " + std::to_string(s.sections.size()) +
                                             " sections given, expected " + std::to_string(n_));
    }
    for (std::size_t k = 0; k < s.sections.size(); ++k) {
      const auto& sec = s.sections[k];
      bool ok = sec.field.dim() == n_ && sec.form.dim() == n_;
      for (const auto& p : sec.field.components) ok = ok && p.n_vars() == n_;
      for (const auto& p : sec.form.components) ok = ok && p.n_vars() == n_;
      if (!ok) {
        throw Error(ErrorKind::DimensionMismatch,
                    "sections[" + std::to_string(k) + "] does not live on R^" + std::to_string(n_));
      }
    }
    if (s.basepoint.size() != n_) {
      throw Error(ErrorKind::Validation, "sections: basepoint has " + std::to_string(s.basepoint.size()) +
                                             " coordinates, expected " + std::to_string(n_));
    }
    try {
      evaluate_sections(s.sections, n_, s.basepoint, tol_);
    } catch (const Error& e) {
      throw Error(ErrorKind::Validation, std::string("sections at basepoint: ") + e.what());
    }
  }
}

std::string DiracFieldSpec::kind() const {
  switch (value_.index()) {
    case 0: return "bivector";
    case 1: return "two_form";
    case 2: return "distribution";
    default: return "sections";
  }
}

std::vector<PolySection> generating_sections(const DiracFieldSpec& spec) {
  const std::size_t n = spec.dim();
  std::vector<PolySection> out;
  if (const auto* b = std::get_if<DiracFieldSpec::Bivector>(&spec.value())) {
    for (std::size_t i = 0; i < n; ++i) {
      PolySection s = PolySection::zero(n);
      for (std::size_t j = 0; j < n; ++j) s.field.components[j] = b->entries[j][i];
      s.form.components[i] = Poly::constant(n, Rational(1));
      out.push_back(std::move(s));
    }
  } else if (const auto* t = std::get_if<DiracFieldSpec::TwoForm>(&spec.value())) {
    for (std::size_t i = 0; i < n; ++i) {
      PolySection s = PolySection::zero(n);
      s.field.components[i] = Poly::constant(n, Rational(1));
      for (std::size_t j = 0; j < n; ++j) s.form.components[j] = t->omega.entries[i][j];
      out.push_back(std::move(s));
    }
  } else if (const auto* d = std::get_if<DiracFieldSpec::Distribution>(&spec.value())) {
    const Vector zero = Vector::Zero(static_cast<Index>(n));
    const Matrix& basis = d->delta.basis();
    for (Index k = 0; k < basis.cols(); ++k) out.push_back(constant_section(basis.col(k), zero));
    const Matrix ann = annihilator(d->delta).basis();
    for (Index k = 0; k < ann.cols(); ++k) out.push_back(constant_section(zero, ann.col(k)));
  } else {
    out = std::get<DiracFieldSpec::Sections>(spec.value()).sections;
  }
  return out;
}

LinearDirac evaluate(const DiracFieldSpec& spec, std::span<const double> point) {
  if (point.size() != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "evaluate: point with " + std::to_string(point.size()) +
                                                  " coordinates on R^" + std::to_string(spec.dim()));
  }
  if (const auto* b = std::get_if<DiracFieldSpec::Bivector>(&spec.value())) {
    return from_bivector(evaluate_matrix(b->entries, point), spec.tol());
  }
  if (const auto* t = std::get_if<DiracFieldSpec::TwoForm>(&spec.value())) {
    return from_two_form(t->omega.evaluate(point), spec.tol());
  }
  if (const auto* d = std::get_if<DiracFieldSpec::Distribution>(&spec.value())) {
    return from_distribution(d->delta);
  }
  return evaluate_sections(std::get<DiracFieldSpec::Sections>(spec.value()).sections, spec.dim(), point,
                           spec.tol());
}

ClosureReport integrability_check(const DiracFieldSpec& spec, const std::vector<Vector>& samples,
                                  double tol) {
  const auto gens = generating_sections(spec);
  std::vector<std::pair<std::string, PolySection>> brackets;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      brackets.emplace_back("(" + std::to_string(i) + ", " + std::to_string(j) + ")",
                            courant_bracket(gens[i], gens[j]));
    }
  }
  ClosureReport report;
  check_closure(spec, brackets, samples, tol, report);
  return report;
}

ClosureReport infinitesimal_invariance(const DiracFieldSpec& spec, const ActionSpec& action,
                                       const std::vector<Vector>& samples, double tol) {
  ClosureReport report;
  if (!action.circle) return report;
  if (static_cast<std::size_t>(action.n) != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "action and Dirac field live in different dimensions");
  }
  const PolyVectorField xi = fundamental_vector_field(action, Rational(1));
  const auto gens = generating_sections(spec);
  std::vector<std::pair<std::string, PolySection>> derived;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    derived.emplace_back("xi=1, s=" + std::to_string(k),
                         PolySection{lie_bracket(xi, gens[k].field), lie_derivative_oneform(xi, gens[k].form)});
  }
  check_closure(spec, derived, samples, tol, report);
  return report;
}

ClosureReport finite_invariance(const DiracFieldSpec& spec, const ActionSpec& action,
                                const std::vector<Vector>& samples, double tol) {
  ClosureReport report;
  if (static_cast<std::size_t>(action.n) != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "action and Dirac field live in different dimensions");
  }
  const std::size_t id = action.identity_index(tol);
  for (const auto& m : samples) {
    const LinearDirac d = evaluate(spec, m);
    for (std::size_t g = 0; g < action.finite.order(); ++g) {
      if (g == id) continue;
      const Matrix& gm = action.finite.elements[g];
      double r = 1.0;  // D degenerate at g m but not at m: cannot be invariant
      try {
        r = distance(transform(gm, d), evaluate(spec, Vector(gm * m)));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegeneratePoint) throw;
      }
      ++report.checks;
      report.max_residual = std::max(report.max_residual, r);
      if (r > tol) {
        report.pass = false;
        report.failures.push_back({"g=" + std::to_string(g), as_std(m), r});
      }
    }
  }
  return report;
}

}  // namespace dirac
