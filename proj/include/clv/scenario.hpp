#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clv/seiberg_witten.hpp"

namespace clv {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// parsing helpers
// ---------------------------------------------------------------------------

namespace scenario_detail {

inline cplx parse_complex(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && (j.size() == 1 || j.size() == 2)) {
    const double re = j[0].get<double>();
    const double im = j.size() == 2 ? j[1].get<double>() : 0.0;
    return cplx(re, im);
  }
  throw SchemaError("complex values must be numbers or [re, im] pairs");
}

inline Poly parse_poly(const json& j, int n) {
  if (!j.is_array()) throw SchemaError("polynomial must be a list of terms");
  Poly out;
  for (const auto& term : j) {
    if (!term.contains("c")) throw SchemaError("polynomial term needs \"c\"");
    Mono m;
    if (term.contains("powers")) {
      const auto& pw = term["powers"];
      if (!pw.is_array() || static_cast<int>(pw.size()) != n)
        throw SchemaError("\"powers\" must list one exponent per coordinate");
      for (int i = 0; i < n; ++i) {
        const int e = pw[i].get<int>();
        if (e < 0 || e > 16) throw SchemaError("exponent out of range");
        m.e[i] = static_cast<uint8_t>(e);
      }
    }
    out += Poly::monomial(m, parse_complex(term["c"]));
  }
  return out;
}

inline unsigned parse_blade(const std::string& name, int n) {
  if (name == "1" || name.empty()) return 0;
  if (name[0] != 'e') throw SchemaError("blade name must be \"1\" or e<digits>");
  unsigned mask = 0;
  int prev = 0;
  for (size_t i = 1; i < name.size(); ++i) {
    const int idx = name[i] - '0';
    if (idx < 1 || idx > n) throw SchemaError("blade index out of range: " + name);
    if (idx <= prev) throw SchemaError("blade indices must ascend: " + name);
    mask |= 1u << (idx - 1);
    prev = idx;
  }
  return mask;
}

inline Signature parse_signature(const json& j) {
  if (!j.is_array()) throw SchemaError("\"signature\" must be a list of +1/-1");
  std::array<int8_t, kMaxDim> d{};
  const int n = static_cast<int>(j.size());
  if (n < 2 || n > kMaxDim) throw SchemaError("dimension must be in [2, 8]");
  for (int i = 0; i < n; ++i) {
    const int v = j[i].get<int>();
    if (v != 1 && v != -1) throw SchemaError("signature entries must be +1/-1");
    d[i] = static_cast<int8_t>(v);
  }
  return Signature::from_list(d, n);
}

inline Geometry parse_geometry(const json& j, Signature sig) {
  if (j.is_string()) {
    if (j.get<std::string>() == "flat") return Geometry::flat(sig);
    throw SchemaError("geometry must be \"flat\" or {\"constant-curvature\": k}");
  }
  if (j.is_object() && j.contains("constant-curvature"))
    return Geometry::constant_curvature(sig, j["constant-curvature"].get<double>());
  throw SchemaError("geometry must be \"flat\" or {\"constant-curvature\": k}");
}

inline GaugePotential parse_gauge(const json& j, const Geometry& g) {
  if (j.is_string()) {
    if (j.get<std::string>() == "none") return GaugePotential::none(g);
    throw SchemaError("gauge must be \"none\" or an object");
  }
  if (!j.is_object() || !j.contains("kind"))
    throw SchemaError("gauge object needs a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "exact") {
    if (!j.contains("chi")) throw SchemaError("exact gauge needs \"chi\"");
    return GaugePotential::exact(g, parse_poly(j["chi"], g.sig().n));
  }
  if (kind == "polynomial-1form") {
    if (!j.contains("components"))
      throw SchemaError("polynomial-1form gauge needs \"components\"");
    std::map<unsigned, Poly> comps;
    for (const auto& [name, poly] : j["components"].items()) {
      const unsigned mask = parse_blade(name, g.sig().n);
      if (blades::grade(mask) != 1)
        throw SchemaError("gauge components must be 1-form blades");
      comps[mask] = parse_poly(poly, g.sig().n);
    }
    return GaugePotential::from_field(g, polynomial_form(g.sig(), comps));
  }
  throw SchemaError("unknown gauge kind: " + kind);
}

inline Spinor<cplx> parse_spinor_value(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw SchemaError("spinor value must list " + std::to_string(dim) +
                      " complex components");
  Spinor<cplx> s(dim);
  for (int i = 0; i < dim; ++i) s[i] = parse_complex(j[i]);
  return s;
}

struct FieldTable {
  std::map<std::string, FormField> forms;
  std::map<std::string, SpinorField> spinors;

  const FormField& form(const std::string& name) const {
    auto it = forms.find(name);
    if (it == forms.end()) throw SchemaError("unknown form field: " + name);
    return it->second;
  }
  const SpinorField& spinor(const std::string& name) const {
    auto it = spinors.find(name);
    if (it == spinors.end()) throw SchemaError("unknown spinor field: " + name);
    return it->second;
  }
};

inline void parse_field(const std::string& name, const json& j,
                        const Geometry& g, const GammaRep& rep,
                        const GaugePotential& pot, FieldTable& out);

inline void parse_exp_scale(const std::string& name, const json& j,
                            const Geometry& g, const GammaRep& rep,
                            const GaugePotential& pot, FieldTable& out) {
  if (!pot.chi())
    throw SchemaError("exp-scale fields need an exact gauge (chi)");
  if (!j.contains("inner")) throw SchemaError("exp-scale needs \"inner\"");
  const int q = j.value("charge", 1);
  FieldTable inner;
  parse_field(name, j["inner"], g, rep, pot, inner);
  if (!inner.forms.empty()) {
    out.forms.insert_or_assign(name,
                               exp_scaled(inner.form(name), *pot.chi(), q));
  } else {
    out.spinors.insert_or_assign(name,
                                 exp_scaled(inner.spinor(name), *pot.chi(), q));
  }
}

inline void parse_field(const std::string& name, const json& j,
                        const Geometry& g, const GammaRep& rep,
                        const GaugePotential& pot, FieldTable& out) {
  if (!j.is_object() || !j.contains("kind"))
    throw SchemaError("field \"" + name + "\" needs a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  const Signature& sig = g.sig();

  if (kind == "polynomial-form" || kind == "constant-form") {
    if (!j.contains("blades"))
      throw SchemaError("form field \"" + name + "\" needs \"blades\"");
    std::map<unsigned, Poly> comps;
    for (const auto& [bname, val] : j["blades"].items()) {
      const unsigned mask = parse_blade(bname, sig.n);
      comps[mask] = (kind == "constant-form")
                        ? Poly::constant(parse_complex(val))
                        : parse_poly(val, sig.n);
    }
    FormField f = polynomial_form(sig, comps);
    f.set_charge(j.value("charge", 0));
    out.forms.insert_or_assign(name, std::move(f));
    return;
  }
  if (kind == "coordinate-spinor") {
    if (!j.contains("phi0") || !j.contains("phi1"))
      throw SchemaError("coordinate-spinor needs \"phi0\" and \"phi1\"");
    SpinorField f = coordinate_spinor_field(
        sig, rep, parse_spinor_value(j["phi0"], rep.dim()),
        parse_spinor_value(j["phi1"], rep.dim()));
    f.set_charge(j.value("charge", 0));
    out.spinors.insert_or_assign(name, std::move(f));
    return;
  }
  if (kind == "constant-spinor") {
    if (!j.contains("value")) throw SchemaError("constant-spinor needs \"value\"");
    SpinorField f =
        constant_spinor_field(sig, rep, parse_spinor_value(j["value"], rep.dim()));
    f.set_charge(j.value("charge", 0));
    out.spinors.insert_or_assign(name, std::move(f));
    return;
  }
  if (kind == "exact-gauge") {
    // the 1-form dχ as a field value (diagnostic convenience)
    if (!j.contains("chi")) throw SchemaError("exact-gauge needs \"chi\"");
    GaugePotential local = GaugePotential::exact(g, parse_poly(j["chi"], sig.n));
    out.forms.insert_or_assign(name, local.potential());
    return;
  }
  if (kind == "exp-scale") {
    parse_exp_scale(name, j, g, rep, pot, out);
    return;
  }
  throw SchemaError("unknown field kind: " + kind);
}

inline OpKind parse_op_kind(const std::string& s) {
  if (s == "L_omega") return OpKind::LOmega;
  if (s == "Script_L_omega") return OpKind::ScriptLOmega;
  if (s == "L_f") return OpKind::LF;
  if (s == "L_alpha") return OpKind::LAlpha;
  if (s == "hat_L_omega") return OpKind::HatLOmega;
  if (s == "hat_Script_L_omega") return OpKind::HatScriptLOmega;
  if (s == "hat_L_f") return OpKind::HatLF;
  if (s == "hat_L_alpha") return OpKind::HatLAlpha;
  throw SchemaError("unknown operator kind: " + s);
}

inline std::vector<OperatorSpec> parse_stages(const json& j,
                                              const FieldTable& fields) {
  if (!j.is_array()) throw SchemaError("pipeline must be a list of stages");
  std::vector<OperatorSpec> out;
  for (const auto& stage : j) {
    if (!stage.contains("op") || !stage.contains("ingredient"))
      throw SchemaError("pipeline stage needs \"op\" and \"ingredient\"");
    OperatorSpec spec{parse_op_kind(stage["op"].get<std::string>()),
                      fields.form(stage["ingredient"].get<std::string>()),
                      stage.value("middle", false)};
    out.push_back(std::move(spec));
  }
  return out;
}

inline std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace scenario_detail

// ---------------------------------------------------------------------------
// backend certification
// ---------------------------------------------------------------------------

struct CertificationItem {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return max_residual <= tolerance; }
};

struct CertificationResult {
  std::vector<CertificationItem> items;
  int rejected_points = 0;
  bool all_pass() const {
    for (const auto& i : items)
      if (!i.pass()) return false;
    return true;
  }
  double worst() const {
    double w = 0;
    for (const auto& i : items) w = std::max(w, i.max_residual);
    return w;
  }
};

/// Certifies a geometry backend: reconstructs the curvature 2-forms from the
/// covariant-derivative commutator on every coframe form and compares the
/// derived curvature data against the backend's closed forms.
inline CertificationResult certify_backend(const Geometry& g, int point_count,
                                           uint64_t seed) {
  const Signature& sig = g.sig();
  const int n = sig.n;
  const CurvaturePack pack = g.curvature();
  Rng rng(seed);
  CertificationResult out;

  CertificationItem r_item{"curvature 2-forms from connection jets", 0.0, 1e-9};
  CertificationItem p_item{"Ricci 1-forms", 0.0, 1e-9};
  CertificationItem s_item{"curvature scalar", 0.0, 1e-9};
  CertificationItem c_item{"conformal 2-forms", 0.0, 1e-9};
  CertificationItem k_item{"normalized Schouten 1-forms", 0.0, 1e-9};
  CertificationItem b_item{"first Bianchi identity (wedge)", 0.0, 1e-10};
  CertificationItem pw_item{"Ricci wedge identity", 0.0, 1e-10};

  std::vector<FormField> coframes;
  for (int f = 0; f < n; ++f)
    coframes.push_back(constant_form(sig, {{1u << f, cplx(1.0)}}));

  for (int ptn = 0; ptn < point_count; ++ptn) {
    const Point p = g.sample_point(rng, &out.rejected_points);

    // reconstruct R_ab = -(1/2) Σ_c ε_c e^c ∧ Ξ_ab(e^c)
    std::vector<Multivector<cplx>> r_extracted;
    r_extracted.reserve(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Multivector<cplx> acc(sig);
        if (a != b) {
          for (int c = 0; c < n; ++c) {
            Multivector<cplx> xi =
                value_jets(curvature_commutator_at(g, coframes[c], a, b, p));
            acc -= wedge(coframe_form<cplx>(sig, c, 1.0), xi) *
                   (0.5 * sig.metric(c));
          }
        }
        r_item.max_residual =
            std::max(r_item.max_residual, norm(acc - pack.R(a, b)));
        r_extracted.push_back(std::move(acc));
      }

    // derived Ricci data from the extracted curvature
    double scalar = 0.0;
    std::vector<Multivector<cplx>> p_extracted;
    for (int a = 0; a < n; ++a) {
      Multivector<cplx> pa(sig);
      for (int b = 0; b < n; ++b)
        pa += interior_raised(b, r_extracted[b * n + a]);
      p_item.max_residual = std::max(p_item.max_residual, norm(pa - pack.p_a[a]));
      scalar += interior_raised(a, pa)[0].real();
      p_extracted.push_back(std::move(pa));
    }
    s_item.max_residual =
        std::max(s_item.max_residual, std::abs(scalar - pack.scalar));

    for (int a = 0; a < n; ++a) {
      // K_a = (1/(n-2)) (𝓡 e_a / (2(n-1)) - P_a)
      Multivector<cplx> ka =
          coframe_form<cplx>(sig, a, cplx(static_cast<double>(sig.metric(a)))) *
          (scalar / (2.0 * (n - 1.0)));
      ka -= p_extracted[a];
      ka.scale(1.0 / (n - 2.0));
      k_item.max_residual = std::max(k_item.max_residual, norm(ka - pack.k_a[a]));
    }

    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        Multivector<cplx> ea =
            coframe_form<cplx>(sig, a, cplx(static_cast<double>(sig.metric(a))));
        Multivector<cplx> eb =
            coframe_form<cplx>(sig, b, cplx(static_cast<double>(sig.metric(b))));
        Multivector<cplx> cab = r_extracted[a * n + b];
        cab -= (wedge(p_extracted[a], eb) - wedge(p_extracted[b], ea)) *
               (1.0 / (n - 2.0));
        cab += wedge(ea, eb) * (scalar / ((n - 1.0) * (n - 2.0)));
        c_item.max_residual = std::max(c_item.max_residual, norm(cab - pack.C(a, b)));
      }

    // wedge identities on the closed forms
    for (int a = 0; a < n; ++a) {
      Multivector<cplx> rb(sig);
      for (int b = 0; b < n; ++b)
        rb += wedge(pack.R(a, b), coframe_form<cplx>(sig, b, 1.0));
      b_item.max_residual = std::max(b_item.max_residual, norm(rb));
    }
    Multivector<cplx> pw(sig);
    for (int a = 0; a < n; ++a)
      pw += wedge(pack.p_a[a], coframe_form<cplx>(sig, a, 1.0));
    pw_item.max_residual = std::max(pw_item.max_residual, norm(pw));
  }

  out.items = {r_item, p_item, s_item, c_item, k_item, b_item, pw_item};
  return out;
}

// ---------------------------------------------------------------------------
// scenario runner
// ---------------------------------------------------------------------------

struct RunOptions {
  std::optional<int> points_override;
  std::optional<uint64_t> seed_override;
  double tolerance_scale = 1.0;
};

struct RunResult {
  int exit_code = 0;
  ojson report;
};

inline ojson certification_json(const CertificationResult& cert) {
  ojson j;
  j["verdict"] = cert.all_pass() ? "pass" : "fail";
  j["rejected_points"] = cert.rejected_points;
  ojson items = ojson::array();
  for (const auto& i : cert.items) {
    ojson it;
    it["identity"] = i.name;
    it["max_residual"] = i.max_residual;
    it["tolerance"] = i.tolerance;
    it["verdict"] = i.pass() ? "pass" : "fail";
    items.push_back(std::move(it));
  }
  j["identities"] = std::move(items);
  return j;
}

inline RunResult run_scenario(const json& spec, const RunOptions& opt) {
  using namespace scenario_detail;
  RunResult result;
  ojson& rep_json = result.report;

  try {
    if (!spec.is_object()) throw SchemaError("scenario must be a JSON object");
    if (spec.value("schema_version", 0) != 1)
      throw SchemaError("unsupported or missing schema_version (expected 1)");
    for (const char* key : {"signature", "geometry", "checks"})
      if (!spec.contains(key))
        throw SchemaError(std::string("scenario needs \"") + key + "\"");

    const Signature sig = parse_signature(spec["signature"]);
    const Geometry g = parse_geometry(spec["geometry"], sig);
    const GammaRep rep(sig);
    const CurvaturePack pack = g.curvature();
    const GaugePotential pot =
        spec.contains("gauge") ? parse_gauge(spec["gauge"], g)
                               : GaugePotential::none(g);

    int point_count = 20;
    uint64_t seed = 1;
    if (spec.contains("points")) {
      point_count = spec["points"].value("count", 20);
      seed = spec["points"].value("seed", 1u);
    }
    if (opt.points_override) point_count = *opt.points_override;
    if (opt.seed_override) seed = *opt.seed_override;
    if (point_count < 1 || point_count > 100000)
      throw SchemaError("points.count out of range");

    FieldTable fields;
    if (spec.contains("fields"))
      for (const auto& [name, fj] : spec["fields"].items())
        parse_field(name, fj, g, rep, pot, fields);

    int rejected = 0;
    Rng rng(seed);
    std::vector<Point> points;
    for (int i = 0; i < point_count; ++i)
      points.push_back(g.sample_point(rng, &rejected));

    const CertificationResult cert = certify_backend(g, std::min(point_count, 20), seed);

    rep_json["schema_version"] = 1;
    rep_json["scenario"] = spec.value("name", "");
    rep_json["generated_at"] = iso_timestamp();
    ojson env;
    env["seed"] = seed;
    env["points"] = point_count;
    env["rejected_points"] = rejected;
    env["signature"] = spec["signature"];
    env["geometry"] = spec["geometry"];
    env["gauge"] = spec.contains("gauge") ? ojson(spec["gauge"]) : ojson("none");
    env["tolerance_scale"] = opt.tolerance_scale;
    env["backend_certification"] = certification_json(cert);
    rep_json["environment"] = std::move(env);

    OpContext ctx{g, rep, pack, pot};
    const DualPairing pairing;

    ojson checks = ojson::array();
    bool all_pass = cert.all_pass();

    const auto& checks_spec = spec["checks"];
    if (!checks_spec.is_array()) throw SchemaError("\"checks\" must be a list");

    for (const auto& cj : checks_spec) {
      ojson cr;
      cr["id"] = cj.value("id", "check-" + std::to_string(checks.size()));
      const double tol = cj.value("tolerance", 1e-9) * opt.tolerance_scale;

      if (cj.contains("equation")) {
        const std::string eq_name = cj["equation"].get<std::string>();
        const auto eq = parse_equation(eq_name);
        if (!eq) throw SchemaError("unknown equation id: " + eq_name);
        cr["kind"] = "equation";
        cr["equation"] = eq_name;
        OpContext ectx = ctx;
        ectx.mass = cj.value("mass", 0.0);
        ectx.gamma_eig = cj.value("gamma", 0.0);

        const FormField* form = nullptr;
        const SpinorField* spinor = nullptr;
        std::string subject = cj.value("subject", "");
        cr["subject"] = subject;
        if (fields.forms.count(subject)) form = &fields.form(subject);
        if (fields.spinors.count(subject)) spinor = &fields.spinor(subject);
        if (cj.contains("spinor")) spinor = &fields.spinor(cj["spinor"].get<std::string>());
        if (!form && !spinor) throw SchemaError("unknown subject field: " + subject);

        double max_norm = 0.0;
        ojson per_point = ojson::array();
        ojson parts;
        for (const Point& p : points) {
          ResidualValue rv = equation_residual(*eq, ectx, form, spinor, p);
          max_norm = std::max(max_norm, rv.norm);
          per_point.push_back(rv.norm);
          for (const auto& [k, v] : rv.parts) {
            if (!parts.contains(k) || parts[k].get<double>() < v) parts[k] = v;
          }
        }
        cr["max_residual"] = max_norm;
        cr["tolerance"] = tol;
        if (!parts.is_null()) cr["detail"] = std::move(parts);
        cr["per_point"] = std::move(per_point);
        const bool pass = max_norm <= tol;
        cr["verdict"] = pass ? "pass" : "fail";
        all_pass = all_pass && pass;
      } else if (cj.contains("pipeline")) {
        cr["kind"] = "pipeline";
        if (!cj.contains("input")) throw SchemaError("pipeline check needs \"input\"");
        const SpinorField& input = fields.spinor(cj["input"].get<std::string>());
        std::vector<OperatorSpec> stages = parse_stages(cj["pipeline"], fields);
        ApplyOptions aopt;
        aopt.precondition_points = points;
        aopt.ingredient_tol = cj.value("ingredient-tolerance", 1e-10);
        const bool harmonic_input = cj.value("input-kind", "twistor") == "harmonic";
        SpinorField outf = pipeline(stages, ctx, input, aopt, harmonic_input);

        std::string final_name = cj.value(
            "final", pot.trivial() ? "HARMONIC(22)" : "GAUGED_HARMONIC(38)");
        const auto eq = parse_equation(final_name);
        if (!eq) throw SchemaError("unknown final equation id: " + final_name);
        cr["final"] = final_name;
        cr["stages"] = static_cast<int>(stages.size());
        cr["output_charge"] = outf.charge();

        double max_norm = 0.0;
        ojson per_point = ojson::array();
        for (const Point& p : points) {
          ResidualValue rv = equation_residual(*eq, ctx, nullptr, &outf, p);
          max_norm = std::max(max_norm, rv.norm);
          per_point.push_back(rv.norm);
        }
        cr["max_residual"] = max_norm;
        cr["tolerance"] = tol;
        cr["per_point"] = std::move(per_point);
        const bool pass = max_norm <= tol;
        cr["verdict"] = pass ? "pass" : "fail";
        all_pass = all_pass && pass;
      } else if (cj.contains("sw")) {
        cr["kind"] = "sw";
        const auto& sw = cj["sw"];
        if (g.sig().n != 4 || !g.sig().euclid())
          throw SchemaError("sw checks need Euclidean dimension 4");
        if (!sw.contains("input")) throw SchemaError("sw check needs \"input\"");
        const SpinorField& input = fields.spinor(sw["input"].get<std::string>());
        std::vector<OperatorSpec> stages =
            sw.contains("candidate") ? parse_stages(sw["candidate"], fields)
                                     : std::vector<OperatorSpec>{};
        ApplyOptions aopt;
        aopt.precondition_points = points;
        SpinorField candidate = pipeline(stages, ctx, input, aopt);

        const double sw_tol = sw.value("tolerance", 1e-9) * opt.tolerance_scale;
        const bool expect_vanishing = sw.value("expect-vanishing", false);
        CurrentCheck cc =
            vanishing_current_check(ctx, candidate, pairing, points, sw_tol);

        double dirac_norm = 0.0, curvature_norm = 0.0;
        for (const Point& p : points) {
          SWResidual r = sw_residuals(ctx, {candidate, pot}, pairing, p);
          dirac_norm = std::max(dirac_norm, r.dirac_norm);
          curvature_norm = std::max(curvature_norm, r.curvature_norm);
        }
        cr["current_max_norm"] = cc.max_norm;
        cr["current_vanishing"] = cc.vanishing;
        cr["expected_vanishing"] = expect_vanishing;
        cr["dirac_residual"] = dirac_norm;
        cr["curvature_residual"] = curvature_norm;
        cr["tolerance"] = sw_tol;
        ojson per_point = ojson::array();
        for (double v : cc.per_point) per_point.push_back(v);
        cr["per_point"] = std::move(per_point);
        const bool pass = (cc.vanishing == expect_vanishing);
        cr["verdict"] = pass ? "pass" : "fail";
        all_pass = all_pass && pass;
      } else {
        throw SchemaError("check must contain \"equation\", \"pipeline\" or \"sw\"");
      }
      checks.push_back(std::move(cr));
    }

    rep_json["checks"] = std::move(checks);
    rep_json["all_pass"] = all_pass;
    result.exit_code = all_pass ? 0 : 1;
    return result;
  } catch (const SchemaError& e) {
    rep_json["error"] = {{"type", "schema"}, {"message", e.what()}};
    result.exit_code = 2;
    return result;
  } catch (const json::exception& e) {
    rep_json["error"] = {{"type", "schema"}, {"message", e.what()}};
    result.exit_code = 2;
    return result;
  } catch (const PreconditionError& e) {
    rep_json["error"] = {{"type", "precondition"},
                         {"equation", e.equation},
                         {"message", e.what()}};
    result.exit_code = 3;
    return result;
  } catch (const SingularityError& e) {
    rep_json["error"] = {{"type", "singularity"}, {"message", e.what()}};
    result.exit_code = 4;
    return result;
  } catch (const UsageError& e) {
    rep_json["error"] = {{"type", "schema"}, {"message", e.what()}};
    result.exit_code = 2;
    return result;
  }
}

inline RunResult certify_scenario(const json& spec, const RunOptions& opt) {
  using namespace scenario_detail;
  RunResult result;
  try {
    if (!spec.is_object() || !spec.contains("signature") || !spec.contains("geometry"))
      throw SchemaError("certification spec needs \"signature\" and \"geometry\"");
    const Signature sig = parse_signature(spec["signature"]);
    const Geometry g = parse_geometry(spec["geometry"], sig);
    int point_count = 100;
    uint64_t seed = 1;
    if (spec.contains("points")) {
      point_count = spec["points"].value("count", 100);
      seed = spec["points"].value("seed", 1u);
    }
    if (opt.points_override) point_count = *opt.points_override;
    if (opt.seed_override) seed = *opt.seed_override;

    const CertificationResult cert = certify_backend(g, point_count, seed);
    result.report["schema_version"] = 1;
    result.report["generated_at"] = iso_timestamp();
    result.report["signature"] = spec["signature"];
    result.report["geometry"] = spec["geometry"];
    result.report["points"] = point_count;
    result.report["seed"] = seed;
    result.report["certification"] = certification_json(cert);
    result.exit_code = cert.all_pass() ? 0 : 1;
    return result;
  } catch (const SchemaError& e) {
    result.report["error"] = {{"type", "schema"}, {"message", e.what()}};
    result.exit_code = 2;
    return result;
  } catch (const json::exception& e) {
    result.report["error"] = {{"type", "schema"}, {"message", e.what()}};
    result.exit_code = 2;
    return result;
  } catch (const SingularityError& e) {
    result.report["error"] = {{"type", "singularity"}, {"message", e.what()}};
    result.exit_code = 4;
    return result;
  }
}

inline ojson equation_listing() {
  ojson out = ojson::array();
  for (const auto& e : equation_table()) {
    ojson row;
    row["id"] = e.name;
    row["subject"] = e.subject;
    row["summary"] = e.summary;
    out.push_back(std::move(row));
  }
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("JSON parse error: ") + e.what());
  }
  return j;
}

}  // namespace clv
