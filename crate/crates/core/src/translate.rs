//! The realizability translations `α rf A` and `α lrf A` as formula-to-formula
//! maps, and the sequential form of a choice statement.
//!
//! A realizer `α|β` is not a term of the language, so a clause `α|β rf B` is
//! rendered through the graph of application:
//! `∀γ(γ = α|β → γ rf B)` with `γ = α|β` spelled out by the least-nonzero
//! condition on prefixes. When `γ rf B` does not mention `γ` (atomic collapse)
//! the quantifier is dropped. `[α] ≠ ∅` is rendered as the bounded existential
//! `∃ζ ≤ fst α ∀n snd α(ζ̄n) = 0`, which keeps every `lrf` output in N_L.

use thiserror::Error;

use crate::formula::terms::{self, cons_term, nonzero_count, prefix_code, shift_of};
use crate::formula::{Formula, Fresh, FunTerm, NumTerm};

pub use crate::formula::terms::component as component_term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `rf`
    Kleene,
    /// `lrf`
    Lifschitz,
}

impl Mode {
    pub fn from_name(name: &str) -> Option<Mode> {
        match name {
            "rf" => Some(Mode::Kleene),
            "lrf" => Some(Mode::Lifschitz),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Kleene => "rf",
            Mode::Lifschitz => "lrf",
        }
    }
}

/// Fresh names for the variables a translation introduces.
pub struct RealizerContext {
    fresh: Fresh,
}

impl RealizerContext {
    pub fn new(f: &Formula, realizer: &FunTerm) -> Self {
        let mut fresh = Fresh::new();
        fresh.reserve_formula(f);
        fresh.reserve_fun_term(realizer);
        RealizerContext { fresh }
    }

    pub fn fresh(&mut self, base: &str) -> String {
        self.fresh.fresh(base)
    }

    pub fn reserve_formula(&mut self, f: &Formula) {
        self.fresh.reserve_formula(f);
    }
}

fn neq_zero(t: NumTerm) -> Formula {
    Formula::imp(Formula::eq(t, NumTerm::Zero), Formula::falsum())
}

/// `α(δ̄k) ≠ 0` and `α(δ̄m) = 0` for all `m < k`.
fn least(alpha: &FunTerm, delta: &FunTerm, k: &NumTerm) -> Formula {
    Formula::and(
        neq_zero(alpha.at(prefix_code(delta, k))),
        Formula::eq(nonzero_count(alpha, delta, k), NumTerm::Zero),
    )
}

/// `γ = α|β`, pointwise: `∀n∀k(least(α, ⟨n⟩⌢β, k) → α((⟨n⟩⌢β)‾k) = γ(n) + 1)`.
pub fn app_graph(alpha: &FunTerm, beta: &FunTerm, gamma: &FunTerm, ctx: &mut RealizerContext) -> Formula {
    let n = ctx.fresh("n");
    let k = ctx.fresh("k");
    let (nv, kv) = (NumTerm::var(n.clone()), NumTerm::var(k.clone()));
    let delta = cons_term(&nv, beta);
    let value = Formula::eq(alpha.at(prefix_code(&delta, &kv)), gamma.at(nv).succ());
    Formula::forall_num(n, Formula::forall_num(k, Formula::imp(least(alpha, &delta, &kv), value)))
}

/// `ξ ∈ [α]`: `∀n(ξ(n) ≤ fst α(n) ∧ snd α(ξ̄n) = 0)`.
pub fn membership(xi: &FunTerm, code: &FunTerm, ctx: &mut RealizerContext) -> Formula {
    let n = ctx.fresh("n");
    let nv = NumTerm::var(n.clone());
    let bound = Formula::le(xi.at(nv.clone()), terms::fst_of(code).at(nv.clone()));
    let test = Formula::eq(terms::snd_of(code).at(prefix_code(xi, &nv)), NumTerm::Zero);
    Formula::forall_num(n, Formula::and(bound, test))
}

/// `[α] ≠ ∅` as `∃ζ ≤ fst α ∀n snd α(ζ̄n) = 0`.
pub fn nonempty(code: &FunTerm, ctx: &mut RealizerContext) -> Formula {
    let z = ctx.fresh("z");
    let n = ctx.fresh("n");
    let zt = FunTerm::var(z.clone());
    let test = Formula::eq(
        terms::snd_of(code).at(prefix_code(&zt, &NumTerm::var(n.clone()))),
        NumTerm::Zero,
    );
    Formula::ExistsFunBdd(z, terms::fst_of(code), Box::new(Formula::forall_num(n, test)))
}

struct Translator<'c> {
    mode: Mode,
    ctx: &'c mut RealizerContext,
}

impl Translator<'_> {
    /// `α|β↓ ∧ α|β ⊩ B`
    fn application(&mut self, alpha: &FunTerm, beta: &FunTerm, b: &Formula) -> Formula {
        let c = self.ctx.fresh("c");
        let gamma = FunTerm::var(c.clone());
        let inner = self.tr(&gamma, b);
        let realized = if inner.free_vars().fun.contains(&c) {
            let graph = app_graph(alpha, beta, &gamma, self.ctx);
            Formula::forall_fun(c, Formula::imp(graph, inner))
        } else {
            inner
        };
        Formula::and(Formula::DefFun(alpha.clone(), beta.clone()), realized)
    }

    /// Renames `x` in `body` when the realizer term mentions it.
    fn unclash(&mut self, x: &str, body: &Formula, a: &FunTerm, fun: bool) -> (String, Formula) {
        let fv = a.free_vars();
        let clash = if fun { fv.fun.contains(x) } else { fv.num.contains(x) };
        if !clash {
            return (x.to_string(), body.clone());
        }
        let y = self.ctx.fresh(x);
        let renamed = if fun {
            body.subst_fun(x, &FunTerm::var(y.clone()))
        } else {
            body.subst_num(x, &NumTerm::var(y.clone()))
        };
        (y, renamed)
    }

    /// `[α] ≠ ∅ ∧ ∀β ∈ [α] P(β)`
    fn compact_clause(&mut self, a: &FunTerm, k: impl FnOnce(&mut Self, &FunTerm) -> Formula) -> Formula {
        let ne = nonempty(a, self.ctx);
        let b = self.ctx.fresh("b");
        let beta = FunTerm::var(b.clone());
        let member = membership(&beta, a, self.ctx);
        let body = k(self, &beta);
        Formula::and(ne, Formula::forall_fun(b, Formula::imp(member, body)))
    }

    fn tr(&mut self, a: &FunTerm, f: &Formula) -> Formula {
        use Formula::*;
        match f {
            Eq(..) => f.clone(),
            DefNum(..) | DefFun(..) | Or(..) | Not(..) | Iff(..) | ExistsNumBdd(..) | ExistsFunBdd(..) => {
                let d = f.desugar();
                self.ctx.reserve_formula(&d);
                self.tr(a, &d)
            }
            And(x, y) => {
                let left = self.tr(&terms::fst_of(a), x);
                let right = self.tr(&terms::snd_of(a), y);
                Formula::and(left, right)
            }
            Imp(x, y) => {
                let b = self.ctx.fresh("b");
                let beta = FunTerm::var(b.clone());
                let hyp = self.tr(&beta, x);
                let concl = self.application(a, &beta, y);
                Formula::forall_fun(b, Formula::imp(hyp, concl))
            }
            ForallNum(x, body) => {
                let (x, body) = self.unclash(x, body, a, false);
                let comp = terms::component(a, &NumTerm::var(x.clone()));
                Formula::forall_num(x, self.tr(&comp, &body))
            }
            ForallFun(x, body) => {
                let (x, body) = self.unclash(x, body, a, true);
                let inner = self.application(a, &FunTerm::var(x.clone()), &body);
                Formula::forall_fun(x, inner)
            }
            ExistsNum(x, body) => match self.mode {
                Mode::Kleene => {
                    let inst = body.subst_num(x, &a.at(NumTerm::Zero));
                    self.tr(&shift_of(a), &inst)
                }
                Mode::Lifschitz => self.compact_clause(a, |t, beta| {
                    let inst = body.subst_num(x, &beta.at(NumTerm::Zero));
                    t.tr(&shift_of(beta), &inst)
                }),
            },
            ExistsFun(x, body) => match self.mode {
                Mode::Kleene => {
                    let inst = body.subst_fun(x, &terms::fst_of(a));
                    self.tr(&terms::snd_of(a), &inst)
                }
                Mode::Lifschitz => self.compact_clause(a, |t, beta| {
                    let inst = body.subst_fun(x, &terms::fst_of(beta));
                    t.tr(&terms::snd_of(beta), &inst)
                }),
            },
        }
    }
}

pub fn translate(mode: Mode, a: &FunTerm, f: &Formula) -> Formula {
    let mut ctx = RealizerContext::new(f, a);
    translate_with(mode, &mut ctx, a, f)
}

pub fn translate_with(mode: Mode, ctx: &mut RealizerContext, a: &FunTerm, f: &Formula) -> Formula {
    Translator { mode, ctx }.tr(a, f).beta_normal()
}

/// `a rf f`
pub fn rf_translate(a: &FunTerm, f: &Formula) -> Formula {
    translate(Mode::Kleene, a, f)
}

/// `a lrf f`
pub fn lrf_translate(a: &FunTerm, f: &Formula) -> Formula {
    translate(Mode::Lifschitz, a, f)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqFormError {
    #[error("{which} has free variables outside {{{allowed}}}: {extra}")]
    FreeVariables { which: &'static str, allowed: String, extra: String },
    #[error("the function variables for the input and the witness must differ")]
    SameVariable,
}

/// `∀ξ(∀n B(ξ_n) → ∃ζ ∀n A(ξ_n, ζ_n))` for `B(ξ)` and `A(ξ, ζ)`.
pub fn sequential_form(b: &Formula, a: &Formula, xi: &str, zeta: &str) -> Result<Formula, SeqFormError> {
    if xi == zeta {
        return Err(SeqFormError::SameVariable);
    }
    let check = |f: &Formula, which: &'static str, allowed: &[&str]| {
        let fv = f.free_vars();
        let mut extra: Vec<String> = fv.num.iter().map(|x| x.to_string()).collect();
        extra.extend(fv.fun.iter().filter(|x| !allowed.contains(&x.as_str())).cloned());
        if extra.is_empty() {
            Ok(())
        } else {
            Err(SeqFormError::FreeVariables { which, allowed: allowed.join(", "), extra: extra.join(", ") })
        }
    };
    check(b, "B", &[xi])?;
    check(a, "A", &[xi, zeta])?;

    let mut fresh = Fresh::new();
    fresh.reserve_formula(b);
    fresh.reserve_formula(a);
    fresh.reserve(xi);
    fresh.reserve(zeta);
    let n = fresh.fresh("n");
    let nv = NumTerm::var(n.clone());
    let xi_n = component_term(&FunTerm::var(xi), &nv);
    let zeta_n = component_term(&FunTerm::var(zeta), &nv);

    let hyp = Formula::forall_num(n.clone(), b.subst_fun(xi, &xi_n));
    let body = a.subst_fun(zeta, &zeta_n).subst_fun(xi, &xi_n);
    let concl = Formula::exists_fun(zeta, Formula::forall_num(n, body));
    Ok(Formula::forall_fun(xi, Formula::imp(hyp, concl)).beta_normal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{in_class, FormulaClass};
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn a() -> FunTerm {
        FunTerm::var("a")
    }

    #[test]
    fn atomic_collapse() {
        assert_eq!(rf_translate(&a(), &p("(= 0 0)")), p("(= 0 0)"));
        assert_eq!(lrf_translate(&a(), &p("(= 0 0)")), p("(= 0 0)"));
        let conj = p("(and (= 0 0) (= 0 0))");
        assert_eq!(lrf_translate(&a(), &conj), conj);
    }

    #[test]
    fn kleene_existential() {
        let f = p("(exists-num x (= (ev xi x) 0))");
        assert_eq!(rf_translate(&a(), &f), p("(= (ev xi (ev a 0)) 0)"));
    }

    #[test]
    fn kleene_implication() {
        let f = p("(imp (= 0 0) (= 0 0))");
        let want = p("(forall-fun b (imp (= 0 0) (and (def-fun a b) (= 0 0))))");
        assert!(rf_translate(&a(), &f).alpha_eq(&want));
    }

    #[test]
    fn lifschitz_existential_shape() {
        let f = p("(exists-num x (= (ev xi x) 0))");
        let t = lrf_translate(&a(), &f);
        let Formula::And(ne, all) = &t else { panic!("{t}") };
        assert!(matches!(**ne, Formula::ExistsFunBdd(..)));
        let Formula::ForallFun(b, inner) = &**all else { panic!("{t}") };
        let Formula::Imp(_, body) = &**inner else { panic!("{t}") };
        let want = Formula::eq(
            FunTerm::var("xi").at(FunTerm::var(b.clone()).at(NumTerm::Zero)),
            NumTerm::Zero,
        );
        assert_eq!(**body, want);
        assert!(in_class(&t, FormulaClass::NL));
        assert!(!in_class(&t, FormulaClass::NK));
    }

    #[test]
    fn universal_number_uses_components() {
        let f = p("(forall-num x (exists-num y (= (ev xi y) x)))");
        let t = rf_translate(&a(), &f);
        let want =
            p("(forall-num x (= (ev xi (ev a (app sub (app mul (app pow2 x) (succ (app mul 2 0))) 1))) x))");
        assert!(t.alpha_eq(&want), "{t}");
    }

    #[test]
    fn nested_binder_with_same_name_is_renamed() {
        let f = p("(forall-num x (forall-num x (exists-num y (= y x))))");
        let t = rf_translate(&a(), &f);
        assert!(in_class(&t, FormulaClass::NK));
        assert!(t.free_vars().num.is_empty());
    }

    #[test]
    fn outputs_land_in_hypothesis_classes() {
        for s in [
            "(imp (not (not (exists-num x (= (ev a1 x) 0)))) (exists-num x (= (ev a1 x) 0)))",
            "(forall-fun xi (imp (forall-num n (= (ev xi n) 0)) (exists-fun zeta (= (ev zeta 0) 1))))",
            "(or (forall-num n (= (ev a1 n) 0)) (exists-num n (= (ev a1 n) 1)))",
            "(exists-num-bdd y 1 (forall-num n (= (app mul y (ev a1 n)) 0)))",
            "(imp (def-fun f g) (def-num f g))",
        ] {
            let f = p(s);
            assert!(in_class(&rf_translate(&a(), &f), FormulaClass::NK), "{s}");
            assert!(in_class(&lrf_translate(&a(), &f), FormulaClass::NL), "{s}");
        }
    }

    #[test]
    fn sequential_form_template() {
        let b = p("(= (ev xi 0) 0)");
        let a = p("(= (ev zeta 0) (ev xi (succ 0)))");
        let s = sequential_form(&b, &a, "xi", "zeta").unwrap();
        let comp = |v: &str| {
            format!("(app sub (app mul (app pow2 n) (succ (app mul 2 {v}))) 1)")
        };
        let want = p(&format!(
            "(forall-fun xi (imp (forall-num n (= (ev xi {}) 0)) (exists-fun zeta (forall-num n (= (ev zeta {}) (ev xi {}))))))",
            comp("0"),
            comp("0"),
            comp("1")
        ));
        assert!(s.alpha_eq(&want), "{s}");
    }

    #[test]
    fn sequential_form_closed_hypothesis() {
        let s = sequential_form(&p("(= 0 0)"), &p("(= (ev zeta 0) 0)"), "xi", "zeta").unwrap();
        let Formula::ForallFun(_, imp) = s else { panic!() };
        let Formula::Imp(hyp, _) = *imp else { panic!() };
        assert!(hyp.alpha_eq(&p("(forall-num n (= 0 0))")));
    }

    #[test]
    fn sequential_form_rejects_stray_variables() {
        let e = sequential_form(&p("(= (ev eta 0) 0)"), &p("(= 0 0)"), "xi", "zeta").unwrap_err();
        assert!(matches!(e, SeqFormError::FreeVariables { which: "B", .. }));
        let e = sequential_form(&p("(= 0 0)"), &p("(= x 0)"), "xi", "zeta").unwrap_err();
        assert!(matches!(e, SeqFormError::FreeVariables { which: "A", .. }));
    }
}
