//! Syntactic classes of formulas: quantifier-free, ∃-free, the self-realizing
//! hypothesis classes N_K and N_L, and the conclusion classes Γ_K, Γ_L, Γ_1.
//!
//! Definedness atoms count as existentials with quantifier-free scope. Bounded
//! existentials are classified as written, and their literal expansions
//! `∃x(x ≤ t ∧ A)` and `∃ξ(∀n ξ(n) ≤ τ(n) ∧ A)` are recognized as the same
//! bounded forms, so desugaring never moves a formula out of its class.
//!
//! The inclusions ∃-free ⊆ N_K ⊆ N_L, N_K ⊆ Γ_K ⊆ Γ_L and Γ_1 ⊆ Γ_K follow by
//! induction on formulas: every hypothesis clause is also admitted by the
//! matching conclusion clause, and the hypothesis classes of Γ_1, Γ_K and Γ_L
//! are nested.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::formula::{Formula, FunTerm, NumTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FormulaClass {
    QuantifierFree,
    ExistsFree,
    NK,
    GammaK,
    NL,
    GammaL,
    Gamma1,
}

impl FormulaClass {
    pub const ALL: [FormulaClass; 7] = [
        FormulaClass::QuantifierFree,
        FormulaClass::ExistsFree,
        FormulaClass::NK,
        FormulaClass::GammaK,
        FormulaClass::NL,
        FormulaClass::GammaL,
        FormulaClass::Gamma1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaClass::QuantifierFree => "quantifier-free",
            FormulaClass::ExistsFree => "exists-free",
            FormulaClass::NK => "nk",
            FormulaClass::GammaK => "gamma-k",
            FormulaClass::NL => "nl",
            FormulaClass::GammaL => "gamma-l",
            FormulaClass::Gamma1 => "gamma-1",
        }
    }

    pub fn from_name(name: &str) -> Option<FormulaClass> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub class: &'static str,
    /// Steps from the root to the offending subformula, e.g. `imp.0/forall-num x`.
    pub path: String,
    pub clause: String,
    pub subformula: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub formula: String,
    pub classes: BTreeMap<&'static str, bool>,
    pub rejections: Vec<Rejection>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Neg {
    ExistsFree,
    NK,
    NL,
}

impl Neg {
    fn label(self) -> &'static str {
        match self {
            Neg::ExistsFree => "exists-free",
            Neg::NK => "N_K",
            Neg::NL => "N_L",
        }
    }
}

struct Fail {
    path: Vec<String>,
    clause: String,
    subformula: String,
}

type Check = Result<(), Fail>;

fn fail(path: &[String], f: &Formula, clause: impl Into<String>) -> Check {
    Err(Fail { path: path.to_vec(), clause: clause.into(), subformula: f.to_string() })
}

fn with<T>(path: &mut Vec<String>, step: impl Into<String>, k: impl FnOnce(&mut Vec<String>) -> T) -> T {
    path.push(step.into());
    let r = k(path);
    path.pop();
    r
}

/// `∀z₁…∀z_k A` with `A` quantifier-free, `k ≥ 0`.
fn is_universal_qf(f: &Formula) -> bool {
    match f {
        Formula::ForallNum(_, a) => is_universal_qf(a),
        _ => f.is_quantifier_free(),
    }
}

fn is_le_zero_diff(f: &Formula) -> Option<(&NumTerm, &NumTerm)> {
    match f {
        Formula::Eq(NumTerm::App(sym, args), NumTerm::Zero) if sym.name() == "sub" => {
            Some((&args[0], &args[1]))
        }
        _ => None,
    }
}

/// The parts of `∃x(x ∸ t = 0 ∧ A)` or `∃ξ(∀n ξ(n) ∸ u = 0 ∧ A)`.
pub(crate) enum BoundedExpansion<'a> {
    Num { var: &'a str, bound: &'a NumTerm, body: &'a Formula },
    /// `bound` is `u`, a term in `index` giving `τ(index)`.
    Fun { var: &'a str, index: &'a str, bound: &'a NumTerm, body: &'a Formula },
}

impl<'a> BoundedExpansion<'a> {
    pub(crate) fn body(&self) -> &'a Formula {
        match self {
            BoundedExpansion::Num { body, .. } | BoundedExpansion::Fun { body, .. } => body,
        }
    }
}

/// Recognizes `f` as the expansion of a bounded existential.
pub(crate) fn bounded_expansion(f: &Formula) -> Option<BoundedExpansion<'_>> {
    match f {
        Formula::ExistsNum(x, inner) => {
            let Formula::And(bound, body) = &**inner else { return None };
            let (lhs, t) = is_le_zero_diff(bound)?;
            (*lhs == NumTerm::Var(x.clone()) && !t.free_vars().num.contains(x))
                .then_some(BoundedExpansion::Num { var: x, bound: t, body })
        }
        Formula::ExistsFun(xi, inner) => {
            let Formula::And(bound, body) = &**inner else { return None };
            let Formula::ForallNum(n, pointwise) = &**bound else { return None };
            let (lhs, u) = is_le_zero_diff(pointwise)?;
            let NumTerm::Eval(g, arg) = lhs else { return None };
            let ok = **g == FunTerm::Var(xi.clone())
                && **arg == NumTerm::Var(n.clone())
                && !u.free_vars().fun.contains(xi);
            ok.then_some(BoundedExpansion::Fun { var: xi, index: n, bound: u, body })
        }
        _ => None,
    }
}

fn expanded_bounded(f: &Formula) -> Option<&Formula> {
    bounded_expansion(f).map(|b| b.body())
}

fn neg(f: &Formula, class: Neg, path: &mut Vec<String>) -> Check {
    use Formula::*;
    if f.is_quantifier_free() {
        return Ok(());
    }
    let no_exists = |what: &str| -> Check {
        fail(path, f, format!("exists-free formulas contain no {what}"))
    };
    match f {
        Eq(..) => Ok(()),
        DefNum(..) | DefFun(..) => {
            if class == Neg::ExistsFree {
                no_exists("definedness atom (an existential)")
            } else {
                Ok(())
            }
        }
        Or(a, b) => {
            if class == Neg::ExistsFree {
                return no_exists("disjunction");
            }
            if a.is_quantifier_free() && b.is_quantifier_free() {
                Ok(())
            } else {
                fail(
                    path,
                    f,
                    format!("{}: a disjunction is an existential and needs quantifier-free disjuncts", class.label()),
                )
            }
        }
        ExistsNum(_, a) | ExistsFun(_, a) | ExistsNumBdd(_, _, a) | ExistsFunBdd(_, _, a) => {
            if class == Neg::ExistsFree {
                return no_exists("existential quantifier");
            }
            let bounded_body = match f {
                ExistsNumBdd(_, _, a) | ExistsFunBdd(_, _, a) => Some(&**a),
                _ => expanded_bounded(f),
            };
            if class == Neg::NL && bounded_body.is_some_and(is_universal_qf) {
                return Ok(());
            }
            if !matches!(f, ExistsFunBdd(..)) && a.is_quantifier_free() {
                return Ok(());
            }
            let clause = match (class, f) {
                (Neg::NK, ExistsFunBdd(..)) => {
                    "N_K: a bounded function existential is not an existential with quantifier-free scope"
                        .to_string()
                }
                (Neg::NL, _) if bounded_body.is_some() => {
                    "N_L: a bounded existential needs a scope of the form ∀z A with A quantifier-free"
                        .to_string()
                }
                _ => format!("{}: the scope of an existential must be quantifier-free", class.label()),
            };
            fail(path, f, clause)
        }
        And(a, b) => {
            with(path, "and.0", |p| neg(a, class, p))?;
            with(path, "and.1", |p| neg(b, class, p))
        }
        Imp(a, b) => {
            with(path, "imp.0", |p| neg(a, class, p))?;
            with(path, "imp.1", |p| neg(b, class, p))
        }
        Iff(a, b) => {
            with(path, "iff.0", |p| neg(a, class, p))?;
            with(path, "iff.1", |p| neg(b, class, p))
        }
        Not(a) => with(path, "not", |p| neg(a, class, p)),
        ForallNum(x, a) => with(path, format!("forall-num {x}"), |p| neg(a, class, p)),
        ForallFun(x, a) => with(path, format!("forall-fun {x}"), |p| neg(a, class, p)),
    }
}

fn pos(f: &Formula, hyp: Neg, name: &str, path: &mut Vec<String>) -> Check {
    use Formula::*;
    let hypothesis = |a: &Formula, step: &str, path: &mut Vec<String>| -> Check {
        with(path, step, |p| neg(a, hyp, p)).map_err(|e| Fail {
            clause: format!("{name}: an implication needs its hypothesis in {} ({})", hyp.label(), e.clause),
            ..e
        })
    };
    match f {
        Eq(..) | DefNum(..) | DefFun(..) => Ok(()),
        And(a, b) => {
            with(path, "and.0", |p| pos(a, hyp, name, p))?;
            with(path, "and.1", |p| pos(b, hyp, name, p))
        }
        Or(a, b) => {
            with(path, "or.0", |p| pos(a, hyp, name, p))?;
            with(path, "or.1", |p| pos(b, hyp, name, p))
        }
        Imp(a, b) => {
            hypothesis(a, "imp.0", path)?;
            with(path, "imp.1", |p| pos(b, hyp, name, p))
        }
        Not(a) => hypothesis(a, "not", path),
        Iff(a, b) => {
            hypothesis(a, "iff.0", path)?;
            hypothesis(b, "iff.1", path)?;
            with(path, "iff.0", |p| pos(a, hyp, name, p))?;
            with(path, "iff.1", |p| pos(b, hyp, name, p))
        }
        ForallNum(x, a) => with(path, format!("forall-num {x}"), |p| pos(a, hyp, name, p)),
        ForallFun(x, a) => with(path, format!("forall-fun {x}"), |p| pos(a, hyp, name, p)),
        ExistsNum(x, a) => with(path, format!("exists-num {x}"), |p| pos(a, hyp, name, p)),
        ExistsFun(x, a) => with(path, format!("exists-fun {x}"), |p| pos(a, hyp, name, p)),
        ExistsNumBdd(x, _, a) => with(path, format!("exists-num-bdd {x}"), |p| pos(a, hyp, name, p)),
        ExistsFunBdd(x, _, a) => with(path, format!("exists-fun-bdd {x}"), |p| pos(a, hyp, name, p)),
    }
}

fn quantifier_free(f: &Formula, path: &mut Vec<String>) -> Check {
    use Formula::*;
    match f {
        Eq(..) => Ok(()),
        And(a, b) | Imp(a, b) | Iff(a, b) => {
            let tag = match f {
                And(..) => "and",
                Imp(..) => "imp",
                _ => "iff",
            };
            with(path, format!("{tag}.0"), |p| quantifier_free(a, p))?;
            with(path, format!("{tag}.1"), |p| quantifier_free(b, p))
        }
        Not(a) => with(path, "not", |p| quantifier_free(a, p)),
        Or(..) => fail(path, f, "quantifier-free formulas contain no disjunction (an existential)"),
        DefNum(..) | DefFun(..) => {
            fail(path, f, "quantifier-free formulas contain no definedness atom (an existential)")
        }
        _ => fail(path, f, "quantifier-free formulas contain no quantifier"),
    }
}

/// Membership test with the first rejection on failure.
pub fn check(f: &Formula, class: FormulaClass) -> Result<(), Rejection> {
    let mut path = Vec::new();
    let r = match class {
        FormulaClass::QuantifierFree => quantifier_free(f, &mut path),
        FormulaClass::ExistsFree => neg(f, Neg::ExistsFree, &mut path),
        FormulaClass::NK => neg(f, Neg::NK, &mut path),
        FormulaClass::NL => neg(f, Neg::NL, &mut path),
        FormulaClass::GammaK => pos(f, Neg::NK, "Γ_K", &mut path),
        FormulaClass::GammaL => pos(f, Neg::NL, "Γ_L", &mut path),
        FormulaClass::Gamma1 => pos(f, Neg::ExistsFree, "Γ_1", &mut path),
    };
    r.map_err(|e| Rejection {
        class: class.name(),
        path: e.path.join("/"),
        clause: e.clause,
        subformula: e.subformula,
    })
}

pub fn in_class(f: &Formula, class: FormulaClass) -> bool {
    check(f, class).is_ok()
}

pub fn classify_report(f: &Formula) -> ClassReport {
    let mut classes = BTreeMap::new();
    let mut rejections = Vec::new();
    for c in FormulaClass::ALL {
        match check(f, c) {
            Ok(()) => {
                classes.insert(c.name(), true);
            }
            Err(r) => {
                classes.insert(c.name(), false);
                rejections.push(r);
            }
        }
    }
    ClassReport { formula: f.to_string(), classes, rejections }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use FormulaClass::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn atomic_is_in_every_class() {
        let r = classify_report(&p("(= 0 0)"));
        assert!(r.classes.values().all(|&b| b));
        assert!(r.rejections.is_empty());
    }

    #[test]
    fn existential_with_quantifier_free_scope() {
        let f = p("(exists-num x (= (ev xi x) 0))");
        assert!(in_class(&f, NK));
        let g = p("(exists-fun xi (= (ev xi 0) 0))");
        assert!(in_class(&g, NK));
        let rej = check(&g, ExistsFree).unwrap_err();
        assert!(rej.clause.contains("existential"));
        assert_eq!(rej.path, "");
    }

    #[test]
    fn markov_principle_is_nk() {
        let m = p("(imp (not (not (exists-num x (= (ev a x) 0)))) (exists-num x (= (ev a x) 0)))");
        assert!(in_class(&m, NK));
        assert!(!in_class(&m, ExistsFree));
        assert!(!in_class(&m, Gamma1));
    }

    #[test]
    fn bounded_universal_is_nl_not_nk() {
        let f = p("(exists-num-bdd y 1 (forall-num n (= (app mul (app sub 1 y) (ev a n)) 0)))");
        assert!(in_class(&f, NL));
        assert!(!in_class(&f, NK));
        assert!(in_class(&f, GammaK));
        assert!(in_class(&f.desugar(), NL));
        assert!(!in_class(&f.desugar(), NK));
    }

    #[test]
    fn implication_hypothesis_rejection_names_clause() {
        let f = p("(imp (forall-num x (exists-num y (forall-num z (= (ev a z) y)))) (= 0 0))");
        let rej = check(&f, GammaK).unwrap_err();
        assert_eq!(rej.path, "imp.0/forall-num x");
        assert!(rej.clause.starts_with("Γ_K: an implication needs its hypothesis in N_K"));
    }

    #[test]
    fn disjunction_handling() {
        let f = p("(or (= x 0) (= x 1))");
        assert!(in_class(&f, NK));
        assert!(!in_class(&f, ExistsFree));
        assert!(!in_class(&f, QuantifierFree));
        let g = p("(or (forall-num n (= (ev a n) 0)) (= 0 0))");
        assert!(!in_class(&g, NK));
        assert!(in_class(&g, GammaK));
    }

    #[test]
    fn definedness_atoms() {
        let f = p("(def-fun alpha xi)");
        assert!(in_class(&f, NK));
        assert!(!in_class(&f, ExistsFree));
        assert!(in_class(&f, Gamma1));
        assert!(in_class(&f.desugar(), NK));
    }

    #[test]
    fn names_roundtrip() {
        for c in FormulaClass::ALL {
            assert_eq!(FormulaClass::from_name(c.name()), Some(c));
        }
    }
}
