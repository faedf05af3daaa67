#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "clv/gamma.hpp"
#include "clv/geometry.hpp"
#include "clv/multivector.hpp"
#include "clv/poly.hpp"

namespace clv {

/// Analytic multivector field: PolyExp coefficients sharing one exponent
/// generator χ. Closed under the whole covariant calculus, so fields in this
/// family provide exact jets at every pipeline stage.
struct AnalyticForm {
  Multivector<PolyExp> mv;
  Poly chi;

  explicit AnalyticForm(Signature sig) : mv(sig) {}
  AnalyticForm(Multivector<PolyExp> m, Poly c) : mv(std::move(m)), chi(std::move(c)) {}
};

struct AnalyticSpinor {
  Spinor<PolyExp> comp;
  Poly chi;
};

inline void require_compatible_chi(const Poly& a, const Poly& b) {
  if (!(a == b) && !a.is_zero() && !b.is_zero())
    throw UsageError("analytic fields carry different exponent generators");
}

inline Poly merge_chi(const Poly& a, const Poly& b) {
  require_compatible_chi(a, b);
  return a.is_zero() ? b : a;
}

constexpr int kAnalyticDepth = 2;

/// Point-indexed Clifford-form field. Evaluation yields jet-valued
/// coefficients in the orthonormal frame; `depth` counts how many leading
/// jet orders are trustworthy (2 for analytic constructors, one fewer per
/// generic derivative).
class FormField {
 public:
  using Evaluator = std::function<Multivector<Jet>(const Point&)>;

  static FormField analytic(AnalyticForm a) {
    FormField f(a.mv.sig());
    f.depth_ = kAnalyticDepth;
    f.analytic_ = std::move(a);
    return f;
  }

  static FormField closure(Signature sig, Evaluator ev, int depth) {
    FormField f(sig);
    f.depth_ = depth;
    f.eval_ = std::move(ev);
    return f;
  }

  static FormField zero(Signature sig) {
    AnalyticForm a{sig};
    return analytic(std::move(a));
  }

  const Signature& sig() const { return sig_; }
  int depth() const { return depth_; }
  int charge() const { return charge_; }
  FormField& set_charge(int q) {
    charge_ = q;
    return *this;
  }
  bool is_analytic() const { return analytic_.has_value(); }
  const AnalyticForm& analytic_form() const {
    if (!analytic_) throw UsageError("field has no analytic backing");
    return *analytic_;
  }

  Multivector<Jet> eval(const Point& p) const {
    if (analytic_) {
      Multivector<Jet> out(sig_);
      for (unsigned m = 0; m < out.size(); ++m) {
        if (analytic_->mv[m].is_zero()) continue;
        out[m] = analytic_->mv[m].eval_jet(p, analytic_->chi);
      }
      return out;
    }
    return eval_(p);
  }

  Multivector<cplx> value(const Point& p) const {
    Multivector<Jet> j = eval(p);
    Multivector<cplx> out(sig_);
    for (unsigned m = 0; m < out.size(); ++m) out[m] = j[m].v;
    return out;
  }

  /// Homogeneous grade when the analytic coefficients are grade-pure.
  std::optional<int> homogeneous_grade() const {
    if (!analytic_) return declared_grade_;
    std::optional<int> g;
    for (unsigned m = 0; m < analytic_->mv.size(); ++m) {
      if (analytic_->mv[m].is_zero()) continue;
      const int gm = blades::grade(m);
      if (g && *g != gm) return std::nullopt;
      g = gm;
    }
    if (!g) return 0;  // zero field counts as a scalar
    return g;
  }

  FormField& declare_grade(int p) {
    declared_grade_ = p;
    return *this;
  }

 private:
  explicit FormField(Signature sig) : sig_(sig) {}

  Signature sig_;
  int depth_ = 0;
  int charge_ = 0;
  std::optional<AnalyticForm> analytic_;
  std::optional<int> declared_grade_;
  Evaluator eval_;
};

class SpinorField {
 public:
  using Evaluator = std::function<Spinor<Jet>(const Point&)>;

  static SpinorField analytic(Signature sig, AnalyticSpinor a) {
    SpinorField f(sig, static_cast<int>(a.comp.size()));
    f.depth_ = kAnalyticDepth;
    f.analytic_ = std::move(a);
    return f;
  }

  static SpinorField closure(Signature sig, int dim, Evaluator ev, int depth) {
    SpinorField f(sig, dim);
    f.depth_ = depth;
    f.eval_ = std::move(ev);
    return f;
  }

  const Signature& sig() const { return sig_; }
  int dim() const { return dim_; }
  int depth() const { return depth_; }
  int charge() const { return charge_; }
  SpinorField& set_charge(int q) {
    charge_ = q;
    return *this;
  }
  bool is_analytic() const { return analytic_.has_value(); }
  const AnalyticSpinor& analytic_spinor() const {
    if (!analytic_) throw UsageError("spinor field has no analytic backing");
    return *analytic_;
  }

  Spinor<Jet> eval(const Point& p) const {
    if (analytic_) {
      Spinor<Jet> out(dim_);
      for (int i = 0; i < dim_; ++i)
        out[i] = analytic_->comp[i].eval_jet(p, analytic_->chi);
      return out;
    }
    return eval_(p);
  }

  Spinor<cplx> value(const Point& p) const {
    Spinor<Jet> j = eval(p);
    Spinor<cplx> out(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = j[i].v;
    return out;
  }

 private:
  SpinorField(Signature sig, int dim) : sig_(sig), dim_(dim) {}

  Signature sig_;
  int dim_ = 0;
  int depth_ = 0;
  int charge_ = 0;
  std::optional<AnalyticSpinor> analytic_;
  Evaluator eval_;
};

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

/// Form field from per-blade polynomial coefficients.
inline FormField polynomial_form(Signature sig,
                                 const std::map<unsigned, Poly>& blades) {
  AnalyticForm a{sig};
  for (const auto& [mask, poly] : blades) {
    if (mask >= sig.blade_count())
      throw UsageError("polynomial_form: blade outside algebra");
    a.mv[mask] = PolyExp(poly);
  }
  return FormField::analytic(std::move(a));
}

inline FormField constant_form(Signature sig,
                               const std::map<unsigned, cplx>& blades) {
  std::map<unsigned, Poly> p;
  for (const auto& [mask, c] : blades) p[mask] = Poly::constant(c);
  return polynomial_form(sig, p);
}

inline SpinorField constant_spinor_field(Signature sig, const GammaRep& rep,
                                         const Spinor<cplx>& value) {
  AnalyticSpinor a;
  a.comp.resize(rep.dim());
  for (int i = 0; i < rep.dim(); ++i) a.comp[i] = PolyExp(Poly::constant(value[i]));
  return SpinorField::analytic(sig, std::move(a));
}

/// Flat twistor ansatz ψ(x) = φ0 + (Σ_a x^a e_a)·φ1 with exact jets.
inline SpinorField coordinate_spinor_field(Signature sig, const GammaRep& rep,
                                           const Spinor<cplx>& phi0,
                                           const Spinor<cplx>& phi1) {
  if (static_cast<int>(phi0.size()) != rep.dim() ||
      static_cast<int>(phi1.size()) != rep.dim())
    throw UsageError("coordinate_spinor_field: spinor dimension mismatch");
  AnalyticSpinor a;
  a.comp.resize(rep.dim());
  for (int i = 0; i < rep.dim(); ++i) a.comp[i] = PolyExp(Poly::constant(phi0[i]));
  for (int mu = 0; mu < sig.n; ++mu) {
    Spinor<cplx> g = rep.act_frame(mu, phi1);
    const double eps = sig.metric(mu);  // e_mu = ε_mu e^mu
    for (int i = 0; i < rep.dim(); ++i) {
      if (g[i] == cplx(0.0)) continue;
      a.comp[i] += PolyExp(Poly::coordinate(mu) * (g[i] * eps));
    }
  }
  return SpinorField::analytic(sig, std::move(a));
}

/// e^{-q χ} scaling; pairs with charge q under an exact potential A = dχ.
inline FormField exp_scaled(const FormField& inner, const Poly& chi, int q) {
  if (!inner.is_analytic())
    throw UsageError("exp_scaled requires an analytic field");
  const AnalyticForm& in = inner.analytic_form();
  require_compatible_chi(in.chi, chi);
  AnalyticForm out{inner.sig()};
  out.chi = chi;
  const PolyExp factor = PolyExp::weighted(-q, Poly::constant(1.0));
  for (unsigned m = 0; m < in.mv.size(); ++m)
    if (!in.mv[m].is_zero()) out.mv[m] = in.mv[m] * factor;
  FormField f = FormField::analytic(std::move(out));
  f.set_charge(inner.charge() + q);
  return f;
}

inline SpinorField exp_scaled(const SpinorField& inner, const Poly& chi, int q) {
  if (!inner.is_analytic())
    throw UsageError("exp_scaled requires an analytic field");
  const AnalyticSpinor& in = inner.analytic_spinor();
  require_compatible_chi(in.chi, chi);
  AnalyticSpinor out;
  out.chi = chi;
  out.comp.resize(in.comp.size());
  const PolyExp factor = PolyExp::weighted(-q, Poly::constant(1.0));
  for (size_t i = 0; i < in.comp.size(); ++i)
    if (!in.comp[i].is_zero()) out.comp[i] = in.comp[i] * factor;
  SpinorField f = SpinorField::analytic(inner.sig(), std::move(out));
  f.set_charge(inner.charge() + q);
  return f;
}

/// Wraps a field behind an opaque closure, discarding the analytic backing.
/// Used to exercise the generic jet-depth bookkeeping.
inline FormField erase_analytic(const FormField& f) {
  return FormField::closure(
      f.sig(), [f](const Point& p) { return f.eval(p); }, f.depth());
}

inline SpinorField erase_analytic(const SpinorField& f) {
  SpinorField out = SpinorField::closure(
      f.sig(), f.dim(), [f](const Point& p) { return f.eval(p); }, f.depth());
  out.set_charge(f.charge());
  return out;
}

}  // namespace clv
