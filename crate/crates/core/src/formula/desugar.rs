//! Elimination of surface sugar, bounded existentials and definedness atoms.

use super::terms::{cons_term, nonzero_count, prefix_code};
use super::{Formula, Fresh, FunTerm, NumTerm};

fn neq_zero(t: NumTerm) -> Formula {
    Formula::imp(Formula::eq(t, NumTerm::Zero), Formula::falsum())
}

struct Desugar {
    fresh: Fresh,
}

impl Desugar {
    /// `α(β)↓`: some `n` has `α(β̄n) ≠ 0` and no smaller `m` does.
    fn def_num(&mut self, alpha: &FunTerm, beta: &FunTerm) -> Formula {
        let n = self.fresh.fresh("n");
        let nv = NumTerm::var(n.clone());
        let hit = neq_zero(alpha.at(prefix_code(beta, &nv)));
        let first = Formula::eq(nonzero_count(alpha, beta, &nv), NumTerm::Zero);
        Formula::exists_num(n, Formula::and(hit, first))
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        use Formula::*;
        match f {
            Eq(..) => f.clone(),
            DefNum(a, b) => self.def_num(a, b),
            DefFun(a, b) => {
                let n = self.fresh.fresh("n");
                let arg = cons_term(&NumTerm::var(n.clone()), b);
                Formula::forall_num(n, self.def_num(a, &arg))
            }
            And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Imp(a, b) => Formula::imp(self.formula(a), self.formula(b)),
            Or(a, b) => {
                let x = self.fresh.fresh("x");
                let xv = NumTerm::var(x.clone());
                let left = Formula::imp(Formula::eq(xv.clone(), NumTerm::Zero), self.formula(a));
                let right = Formula::imp(neq_zero(xv), self.formula(b));
                Formula::exists_num(x, Formula::and(left, right))
            }
            Not(a) => Formula::imp(self.formula(a), Formula::falsum()),
            Iff(a, b) => {
                let (a, b) = (self.formula(a), self.formula(b));
                Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
            }
            ForallNum(x, a) => Formula::forall_num(x.clone(), self.formula(a)),
            ForallFun(x, a) => Formula::forall_fun(x.clone(), self.formula(a)),
            ExistsNum(x, a) => Formula::exists_num(x.clone(), self.formula(a)),
            ExistsFun(x, a) => Formula::exists_fun(x.clone(), self.formula(a)),
            // the bound lies outside the binder, so a clash with it is renamed away
            ExistsNumBdd(x, t, a) => {
                let (x, a) = if t.free_vars().num.contains(x) {
                    let y = self.fresh.fresh(x);
                    (y.clone(), a.subst_num(x, &NumTerm::var(y)))
                } else {
                    (x.clone(), a.as_ref().clone())
                };
                let bound = Formula::le(NumTerm::var(x.clone()), t.clone());
                Formula::exists_num(x, Formula::and(bound, self.formula(&a)))
            }
            ExistsFunBdd(x, t, a) => {
                let (x, a) = if t.free_vars().fun.contains(x) {
                    let y = self.fresh.fresh(x);
                    (y.clone(), a.subst_fun(x, &FunTerm::var(y)))
                } else {
                    (x.clone(), a.as_ref().clone())
                };
                let n = self.fresh.fresh("n");
                let nv = NumTerm::var(n.clone());
                let pointwise = Formula::le(FunTerm::var(x.clone()).at(nv.clone()), t.at(nv));
                let bound = Formula::forall_num(n, pointwise);
                Formula::exists_fun(x, Formula::and(bound, self.formula(&a)))
            }
        }
    }
}

impl Formula {
    /// Rewrites `or`, `not`, `iff`, bounded existentials and definedness atoms
    /// into the core connectives. Introduced binders are fresh for the whole formula.
    pub fn desugar(&self) -> Formula {
        let mut fresh = Fresh::new();
        fresh.reserve_formula(self);
        Desugar { fresh }.formula(self)
    }

    /// True when no sugar, bounded existential or definedness atom remains.
    pub fn is_core(&self) -> bool {
        use Formula::*;
        match self {
            Eq(..) => true,
            DefNum(..) | DefFun(..) | Or(..) | Not(..) | Iff(..) => false,
            ExistsNumBdd(..) | ExistsFunBdd(..) => false,
            And(a, b) | Imp(a, b) => a.is_core() && b.is_core(),
            ForallNum(_, a) | ForallFun(_, a) | ExistsNum(_, a) | ExistsFun(_, a) => a.is_core(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn bounded_binder_does_not_capture_its_bound() {
        let f = parse("(exists-num-bdd z y (= z 0))").unwrap().subst_num("y", &NumTerm::var("z"));
        let want = parse("(exists-num w (and (= (app sub w z) 0) (= w 0)))").unwrap();
        assert!(f.desugar().alpha_eq(&want), "{}", f.desugar());
        let g = parse("(exists-fun-bdd xi eta (= (ev xi 0) 0))").unwrap().subst_fun("eta", &FunTerm::var("xi"));
        assert!(g.desugar().free_vars().fun.contains("xi"), "{}", g.desugar());
    }

    #[test]
    fn disjunction_expansion() {
        let f = parse("(or (= 0 0) (= 1 1))").unwrap();
        let want = parse(
            "(exists-num x (and (imp (= x 0) (= 0 0)) (imp (imp (= x 0) (= 0 1)) (= 1 1))))",
        )
        .unwrap();
        assert!(f.desugar().alpha_eq(&want), "{}", f.desugar());
    }

    #[test]
    fn bounded_function_quantifier() {
        let f = parse("(exists-fun-bdd xi tau (= (ev xi 0) 0))").unwrap();
        let want = parse(
            "(exists-fun xi (and (forall-num n (= (app sub (ev xi n) (ev tau n)) 0)) (= (ev xi 0) 0)))",
        )
        .unwrap();
        assert!(f.desugar().alpha_eq(&want));
    }

    #[test]
    fn definedness_has_quantifier_free_scope() {
        let f = parse("(def-num alpha beta)").unwrap().desugar();
        match &f {
            Formula::ExistsNum(_, body) => assert!(body.is_quantifier_free()),
            other => panic!("unexpected {other}"),
        }
        let g = parse("(def-fun alpha beta)").unwrap().desugar();
        match &g {
            Formula::ForallNum(_, inner) => assert!(matches!(**inner, Formula::ExistsNum(..))),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn idempotent_and_core() {
        let f = parse("(iff (not (exists-num-bdd y 3 (= y 2))) (def-fun a b))").unwrap();
        let d = f.desugar();
        assert!(d.is_core());
        assert_eq!(d.desugar(), d);
    }
}
