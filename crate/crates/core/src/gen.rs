//! Seeded random formulas for the property suites.
//!
//! [`FormulaGen::formula`] draws from the whole grammar. The `*_sentence`
//! generators draw closed formulas of a class whose truth the checker can
//! settle at the default bounds, mostly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, FunTerm, NumTerm};
use crate::symbols::SymId;

const NUM_VARS: [&str; 4] = ["x", "y", "z", "n"];
const FUN_VARS: [&str; 4] = ["xi", "eta", "zeta", "alpha"];
const SMALL_SYMS: [&str; 6] = ["add", "mul", "sub", "min", "max", "mod"];

pub struct FormulaGen {
    rng: ChaCha8Rng,
    max_depth: u32,
}

fn app(name: &str, args: Vec<NumTerm>) -> NumTerm {
    NumTerm::App(SymId::named(name).expect("standard symbol"), args)
}

/// Scope of bound variables while generating sentences.
#[derive(Clone, Default)]
struct Scope {
    nums: Vec<String>,
    funs: Vec<String>,
}

impl Scope {
    fn num(&self, name: &str) -> Self {
        let mut s = self.clone();
        s.nums.push(name.into());
        s
    }

    fn fun(&self, name: &str) -> Self {
        let mut s = self.clone();
        s.funs.push(name.into());
        s
    }
}

impl FormulaGen {
    pub fn new(seed: u64, max_depth: u32) -> Self {
        FormulaGen { rng: ChaCha8Rng::seed_from_u64(seed), max_depth }
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty")
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Any formula of depth at most `max_depth`, free variables allowed.
    pub fn formula(&mut self) -> Formula {
        let d = self.rng.gen_range(0..=self.max_depth);
        self.any(d)
    }

    fn any(&mut self, depth: u32) -> Formula {
        if depth == 0 {
            return self.any_atom();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..13) {
            0 => Formula::and(self.any(d), self.any(d)),
            1 => Formula::imp(self.any(d), self.any(d)),
            2 => Formula::or(self.any(d), self.any(d)),
            3 => Formula::not(self.any(d)),
            4 => Formula::iff(self.any(d), self.any(d)),
            5 => Formula::forall_num(*self.pick(&NUM_VARS), self.any(d)),
            6 => Formula::forall_fun(*self.pick(&FUN_VARS), self.any(d)),
            7 => Formula::exists_num(*self.pick(&NUM_VARS), self.any(d)),
            8 => Formula::exists_fun(*self.pick(&FUN_VARS), self.any(d)),
            9 => {
                let x = *self.pick(&NUM_VARS);
                let bound = self.term_avoiding(x, 1);
                Formula::ExistsNumBdd(x.into(), bound, Box::new(self.any(d)))
            }
            10 => {
                let xi = *self.pick(&FUN_VARS);
                let bound = self.fun_term_avoiding(xi, 1);
                Formula::ExistsFunBdd(xi.into(), bound, Box::new(self.any(d)))
            }
            11 => {
                let body = if d > 0 && self.chance(0.5) { self.universal_qf(d) } else { self.qf(d) };
                let x = *self.pick(&NUM_VARS);
                let bound = self.term_avoiding(x, 1);
                Formula::ExistsNumBdd(x.into(), bound, Box::new(body))
            }
            _ => self.any_atom(),
        }
    }

    fn qf(&mut self, depth: u32) -> Formula {
        if depth == 0 {
            return Formula::eq(self.num_term(2), self.num_term(2));
        }
        let d = depth - 1;
        match self.rng.gen_range(0..4) {
            0 => Formula::and(self.qf(d), self.qf(d)),
            1 => Formula::imp(self.qf(d), self.qf(d)),
            2 => Formula::not(self.qf(d)),
            _ => Formula::eq(self.num_term(2), self.num_term(2)),
        }
    }

    /// Needs `depth ≥ 1`.
    fn universal_qf(&mut self, depth: u32) -> Formula {
        let x = *self.pick(&NUM_VARS);
        Formula::forall_num(x, self.qf(depth - 1))
    }

    fn any_atom(&mut self) -> Formula {
        match self.rng.gen_range(0..10) {
            0 => Formula::DefNum(self.fun_term(1), self.fun_term(1)),
            1 => Formula::DefFun(self.fun_term(1), self.fun_term(1)),
            _ => Formula::eq(self.num_term(2), self.num_term(2)),
        }
    }

    pub fn num_term(&mut self, depth: u32) -> NumTerm {
        if depth == 0 {
            return match self.rng.gen_range(0..3) {
                0 => NumTerm::Zero,
                1 => NumTerm::numeral(self.rng.gen_range(1..4)),
                _ => NumTerm::var(*self.pick(&NUM_VARS)),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..6) {
            0 | 1 => {
                let s = *self.pick(&SMALL_SYMS);
                let args = vec![self.num_term(d), self.num_term(d)];
                app(s, args)
            }
            2 => NumTerm::Eval(Box::new(self.fun_term(d)), Box::new(self.num_term(d))),
            3 => self.num_term(d).succ(),
            _ => self.num_term(0),
        }
    }

    pub fn fun_term(&mut self, depth: u32) -> FunTerm {
        if depth == 0 {
            return match self.rng.gen_range(0..4) {
                0 => FunTerm::Succ,
                _ => FunTerm::var(*self.pick(&FUN_VARS)),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => {
                let x = *self.pick(&NUM_VARS);
                FunTerm::lambda(x, self.num_term(d))
            }
            1 => FunTerm::Rec(Box::new(self.num_term(d)), Box::new(self.fun_term(d))),
            _ => self.fun_term(0),
        }
    }

    fn term_avoiding(&mut self, x: &str, depth: u32) -> NumTerm {
        loop {
            let t = self.num_term(depth);
            if !t.free_vars().num.contains(x) {
                return t;
            }
        }
    }

    fn fun_term_avoiding(&mut self, xi: &str, depth: u32) -> FunTerm {
        loop {
            let t = self.fun_term(depth);
            if !t.free_vars().fun.contains(xi) {
                return t;
            }
        }
    }

    /// A closed term over the variables in scope, small enough to evaluate.
    fn scoped_term(&mut self, scope: &Scope, depth: u32) -> NumTerm {
        if depth == 0 || self.chance(0.3) {
            if !scope.nums.is_empty() && self.chance(0.7) {
                return NumTerm::var(self.pick(&scope.nums).clone());
            }
            return NumTerm::numeral(self.rng.gen_range(0..4));
        }
        let d = depth - 1;
        if !scope.funs.is_empty() && self.chance(0.25) {
            let f = self.pick(&scope.funs).clone();
            return NumTerm::Eval(Box::new(FunTerm::var(f)), Box::new(self.scoped_term(scope, d)));
        }
        let s = *self.pick(&SMALL_SYMS);
        let args = vec![self.scoped_term(scope, d), self.scoped_term(scope, d)];
        app(s, args)
    }

    /// An equation that often holds: an algebraic law instance half the time.
    fn scoped_atom(&mut self, scope: &Scope) -> Formula {
        let a = self.scoped_term(scope, 1);
        let b = self.scoped_term(scope, 1);
        match self.rng.gen_range(0..8) {
            0 => Formula::eq(app("add", vec![a.clone(), b.clone()]), app("add", vec![b, a])),
            1 => Formula::eq(app("max", vec![a.clone(), b.clone()]), app("max", vec![b, a])),
            2 => Formula::eq(app("sub", vec![a.clone(), app("add", vec![a, b])]), NumTerm::Zero),
            3 => Formula::eq(app("mul", vec![a, NumTerm::Zero]), NumTerm::Zero),
            _ => Formula::eq(a, b),
        }
    }

    fn scoped_qf(&mut self, scope: &Scope, depth: u32) -> Formula {
        if depth == 0 {
            return self.scoped_atom(scope);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => Formula::and(self.scoped_qf(scope, d), self.scoped_qf(scope, d)),
            1 => Formula::imp(self.scoped_qf(scope, d), self.scoped_qf(scope, d)),
            2 => Formula::not(self.scoped_qf(scope, d)),
            _ => self.scoped_atom(scope),
        }
    }

    fn fresh_num(&mut self, scope: &Scope) -> String {
        NUM_VARS.iter().find(|v| !scope.nums.iter().any(|s| s == *v)).map_or_else(
            || format!("x{}", scope.nums.len()),
            |v| v.to_string(),
        )
    }

    fn fresh_fun(&mut self, scope: &Scope) -> String {
        FUN_VARS.iter().find(|v| !scope.funs.iter().any(|s| s == *v)).map_or_else(
            || format!("xi{}", scope.funs.len()),
            |v| v.to_string(),
        )
    }

    /// A closed N_K formula. Existentials have quantifier-free scope and
    /// universals stay at most two deep so that deciding it is cheap.
    pub fn nk_sentence(&mut self) -> Formula {
        let d = self.rng.gen_range(1..=self.max_depth.min(4));
        self.nk(&Scope::default(), d, 2)
    }

    fn nk(&mut self, scope: &Scope, depth: u32, quantifiers: u32) -> Formula {
        if depth == 0 {
            return self.scoped_atom(scope);
        }
        let d = depth - 1;
        let q = quantifiers > 0;
        match self.rng.gen_range(0..8) {
            0 => Formula::and(self.nk(scope, d, quantifiers / 2), self.nk(scope, d, quantifiers / 2)),
            1 => Formula::imp(self.nk(scope, d, quantifiers / 2), self.nk(scope, d, quantifiers / 2)),
            2 => Formula::not(self.nk(scope, d, quantifiers / 2)),
            3 if q => {
                let x = self.fresh_num(scope);
                let inner = scope.num(&x);
                Formula::forall_num(x, self.nk(&inner, d, quantifiers - 1))
            }
            4 if q => {
                let xi = self.fresh_fun(scope);
                let inner = scope.fun(&xi);
                Formula::forall_fun(xi, self.nk(&inner, d, quantifiers - 1))
            }
            5 | 6 => {
                let x = self.fresh_num(scope);
                let inner = scope.num(&x);
                let body = self.scoped_qf(&inner, d.min(1));
                Formula::exists_num(x, body)
            }
            _ => self.scoped_qf(scope, d.min(2)),
        }
    }

    /// A closed N_L formula built around a bounded existential `∃x ≤ t ∀z A`
    /// or `∃ξ ≤ τ ∀z A` with `A` a conjunction of equations, under at most
    /// one universal and optionally as the conclusion of a quantifier-free
    /// hypothesis.
    pub fn nl_bounded_sentence(&mut self) -> Formula {
        let mut scope = Scope::default();
        let outer = self.chance(0.5).then(|| {
            let y = self.fresh_num(&scope);
            scope = scope.num(&y);
            y
        });
        let core = if self.chance(0.6) {
            let x = self.fresh_num(&scope);
            let bound = self.scoped_term(&scope, 1);
            let z = format!("z{}", scope.nums.len());
            let inner = scope.num(&x).num(&z);
            let body = self.conjunction(&inner);
            Formula::ExistsNumBdd(x, bound, Box::new(Formula::forall_num(z, body)))
        } else {
            let xi = self.fresh_fun(&scope);
            let k = self.rng.gen_range(1..3);
            let bound = FunTerm::lambda("m", NumTerm::numeral(k));
            let z = format!("z{}", scope.nums.len());
            let inner = scope.fun(&xi).num(&z);
            let body = self.conjunction(&inner);
            Formula::ExistsFunBdd(xi, bound, Box::new(Formula::forall_num(z, body)))
        };
        let core = if self.chance(0.3) { Formula::imp(self.scoped_qf(&scope, 1), core) } else { core };
        match outer {
            Some(y) => Formula::forall_num(y, core),
            None => core,
        }
    }

    fn conjunction(&mut self, scope: &Scope) -> Formula {
        let mut f = self.scoped_atom(scope);
        for _ in 0..self.rng.gen_range(0..2) {
            f = Formula::and(f, self.scoped_atom(scope));
        }
        f
    }
}

/// Nesting depth of connectives and quantifiers.
pub fn formula_depth(f: &Formula) -> u32 {
    use Formula::*;
    match f {
        Eq(..) | DefNum(..) | DefFun(..) => 0,
        And(a, b) | Imp(a, b) | Or(a, b) | Iff(a, b) => 1 + formula_depth(a).max(formula_depth(b)),
        Not(a)
        | ForallNum(_, a)
        | ForallFun(_, a)
        | ExistsNum(_, a)
        | ExistsFun(_, a)
        | ExistsNumBdd(_, _, a)
        | ExistsFunBdd(_, _, a) => 1 + formula_depth(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{in_class, FormulaClass};

    #[test]
    fn seeded_and_depth_limited() {
        let a: Vec<String> = {
            let mut g = FormulaGen::new(3, 6);
            (0..50).map(|_| g.formula().to_string()).collect()
        };
        let mut g = FormulaGen::new(3, 6);
        for s in &a {
            let f = g.formula();
            assert_eq!(&f.to_string(), s);
            assert!(formula_depth(&f) <= 6);
        }
    }

    #[test]
    fn sentence_generators_hit_their_classes() {
        let mut g = FormulaGen::new(11, 6);
        for _ in 0..200 {
            let f = g.nk_sentence();
            assert!(in_class(&f, FormulaClass::NK), "{f}");
            assert!(f.free_vars().is_empty(), "{f}");
            let h = g.nl_bounded_sentence();
            assert!(in_class(&h, FormulaClass::NL), "{h}");
            assert!(h.free_vars().is_empty(), "{h}");
        }
    }
}
