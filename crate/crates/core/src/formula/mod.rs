//! Abstract syntax of the two-sorted language: number terms, function terms and
//! formulas, together with the s-expression reader and printer, capture-avoiding
//! substitution and desugaring.
//!
//! Disjunction, negation and equivalence exist only as surface sugar
//! ([`Formula::Or`], [`Formula::Not`], [`Formula::Iff`]); falsum is `0 = 1`.

mod desugar;
mod parse;
mod print;
mod subst;
pub mod terms;

use std::collections::{BTreeSet, HashSet};

pub use parse::{parse, parse_fun_term, parse_num_term, ParseError, ParseErrorKind};
pub use subst::SubstError;

use crate::symbols::SymId;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NumTerm {
    Var(String),
    Zero,
    /// Application of a primitive-recursive symbol; `args.len()` is the symbol's arity.
    App(SymId, Vec<NumTerm>),
    Eval(Box<FunTerm>, Box<NumTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunTerm {
    Var(String),
    Succ,
    Lambda(String, Box<NumTerm>),
    /// The recursor `R t τ`: value `t` at 0, `τ` applied to the previous value after that.
    Rec(Box<NumTerm>, Box<FunTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(NumTerm, NumTerm),
    /// `α(β)↓`
    DefNum(FunTerm, FunTerm),
    /// `α|β↓`
    DefFun(FunTerm, FunTerm),
    And(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForallNum(String, Box<Formula>),
    ForallFun(String, Box<Formula>),
    ExistsNum(String, Box<Formula>),
    ExistsFun(String, Box<Formula>),
    /// `∃x ≤ t A`; `x` is not free in `t`.
    ExistsNumBdd(String, NumTerm, Box<Formula>),
    /// `∃ξ ≤ τ A`; `ξ` is not free in `τ`.
    ExistsFunBdd(String, FunTerm, Box<Formula>),
}

/// A variable together with its sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Num(String),
    Fun(String),
}

impl Var {
    pub fn name(&self) -> &str {
        match self {
            Var::Num(n) | Var::Fun(n) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Num(NumTerm),
    Fun(FunTerm),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub num: BTreeSet<String>,
    pub fun: BTreeSet<String>,
}

impl FreeVars {
    pub fn contains(&self, v: &Var) -> bool {
        match v {
            Var::Num(n) => self.num.contains(n),
            Var::Fun(n) => self.fun.contains(n),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty() && self.fun.is_empty()
    }

    fn extend(&mut self, other: FreeVars) {
        self.num.extend(other.num);
        self.fun.extend(other.fun);
    }
}

impl NumTerm {
    pub fn var(name: impl Into<String>) -> Self {
        NumTerm::Var(name.into())
    }

    /// The numeral `succ^k(0)`.
    pub fn numeral(k: u64) -> Self {
        (0..k).fold(NumTerm::Zero, |t, _| t.succ())
    }

    pub fn succ(self) -> Self {
        NumTerm::Eval(Box::new(FunTerm::Succ), Box::new(self))
    }

    /// `k` when the term is a numeral `succ^k(0)`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut t = self;
        let mut k = 0u64;
        loop {
            match t {
                NumTerm::Zero => return Some(k),
                NumTerm::Eval(f, inner) if **f == FunTerm::Succ => {
                    k += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }

    /// Application of a built-in symbol; panics on unknown names or wrong arity.
    pub(crate) fn sym(name: &str, args: Vec<NumTerm>) -> Self {
        let id = SymId::builtin(name);
        assert_eq!(id.arity(), args.len(), "arity of `{name}`");
        NumTerm::App(id, args)
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut fv);
        fv
    }

    fn collect_free(&self, fv: &mut FreeVars) {
        match self {
            NumTerm::Var(x) => {
                fv.num.insert(x.clone());
            }
            NumTerm::Zero => {}
            NumTerm::App(_, args) => args.iter().for_each(|a| a.collect_free(fv)),
            NumTerm::Eval(f, t) => {
                f.collect_free(fv);
                t.collect_free(fv);
            }
        }
    }

    fn collect_names(&self, out: &mut HashSet<String>) {
        match self {
            NumTerm::Var(x) => {
                out.insert(x.clone());
            }
            NumTerm::Zero => {}
            NumTerm::App(_, args) => args.iter().for_each(|a| a.collect_names(out)),
            NumTerm::Eval(f, t) => {
                f.collect_names(out);
                t.collect_names(out);
            }
        }
    }
}

impl FunTerm {
    pub fn var(name: impl Into<String>) -> Self {
        FunTerm::Var(name.into())
    }

    pub fn lambda(x: impl Into<String>, body: NumTerm) -> Self {
        FunTerm::Lambda(x.into(), Box::new(body))
    }

    /// `self(t)`, contracting the redex when `self` is a λ-abstraction.
    pub fn at(&self, t: NumTerm) -> NumTerm {
        match self {
            FunTerm::Lambda(x, body) => body.subst_num(x, &t),
            _ => NumTerm::Eval(Box::new(self.clone()), Box::new(t)),
        }
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut fv);
        fv
    }

    fn collect_free(&self, fv: &mut FreeVars) {
        match self {
            FunTerm::Var(x) => {
                fv.fun.insert(x.clone());
            }
            FunTerm::Succ => {}
            FunTerm::Lambda(x, body) => {
                let mut inner = body.free_vars();
                inner.num.remove(x);
                fv.extend(inner);
            }
            FunTerm::Rec(t, f) => {
                t.collect_free(fv);
                f.collect_free(fv);
            }
        }
    }

    fn collect_names(&self, out: &mut HashSet<String>) {
        match self {
            FunTerm::Var(x) => {
                out.insert(x.clone());
            }
            FunTerm::Succ => {}
            FunTerm::Lambda(x, body) => {
                out.insert(x.clone());
                body.collect_names(out);
            }
            FunTerm::Rec(t, f) => {
                t.collect_names(out);
                f.collect_names(out);
            }
        }
    }
}

impl Term {
    pub fn free_vars(&self) -> FreeVars {
        match self {
            Term::Num(t) => t.free_vars(),
            Term::Fun(f) => f.free_vars(),
        }
    }
}

impl Formula {
    pub fn eq(a: NumTerm, b: NumTerm) -> Self {
        Formula::Eq(a, b)
    }

    /// `0 = 1`
    pub fn falsum() -> Self {
        Formula::Eq(NumTerm::Zero, NumTerm::numeral(1))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall_num(x: impl Into<String>, a: Formula) -> Self {
        Formula::ForallNum(x.into(), Box::new(a))
    }

    pub fn forall_fun(x: impl Into<String>, a: Formula) -> Self {
        Formula::ForallFun(x.into(), Box::new(a))
    }

    pub fn exists_num(x: impl Into<String>, a: Formula) -> Self {
        Formula::ExistsNum(x.into(), Box::new(a))
    }

    pub fn exists_fun(x: impl Into<String>, a: Formula) -> Self {
        Formula::ExistsFun(x.into(), Box::new(a))
    }

    /// `a ≤ b`, rendered as `a ∸ b = 0`.
    pub fn le(a: NumTerm, b: NumTerm) -> Self {
        Formula::Eq(NumTerm::sym("sub", vec![a, b]), NumTerm::Zero)
    }

    pub fn free_vars(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut fv);
        fv
    }

    fn collect_free(&self, fv: &mut FreeVars) {
        match self {
            Formula::Eq(a, b) => {
                a.collect_free(fv);
                b.collect_free(fv);
            }
            Formula::DefNum(a, b) | Formula::DefFun(a, b) => {
                a.collect_free(fv);
                b.collect_free(fv);
            }
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.collect_free(fv);
                b.collect_free(fv);
            }
            Formula::Not(a) => a.collect_free(fv),
            Formula::ForallNum(x, a) | Formula::ExistsNum(x, a) => {
                let mut inner = a.free_vars();
                inner.num.remove(x);
                fv.extend(inner);
            }
            Formula::ForallFun(x, a) | Formula::ExistsFun(x, a) => {
                let mut inner = a.free_vars();
                inner.fun.remove(x);
                fv.extend(inner);
            }
            Formula::ExistsNumBdd(x, t, a) => {
                t.collect_free(fv);
                let mut inner = a.free_vars();
                inner.num.remove(x);
                fv.extend(inner);
            }
            Formula::ExistsFunBdd(x, t, a) => {
                t.collect_free(fv);
                let mut inner = a.free_vars();
                inner.fun.remove(x);
                fv.extend(inner);
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn names(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut HashSet<String>) {
        match self {
            Formula::Eq(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::DefNum(a, b) | Formula::DefFun(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Not(a) => a.collect_names(out),
            Formula::ForallNum(x, a)
            | Formula::ExistsNum(x, a)
            | Formula::ForallFun(x, a)
            | Formula::ExistsFun(x, a) => {
                out.insert(x.clone());
                a.collect_names(out);
            }
            Formula::ExistsNumBdd(x, t, a) => {
                out.insert(x.clone());
                t.collect_names(out);
                a.collect_names(out);
            }
            Formula::ExistsFunBdd(x, t, a) => {
                out.insert(x.clone());
                t.collect_names(out);
                a.collect_names(out);
            }
        }
    }

    /// True when no quantifier, bounded quantifier, definedness atom or
    /// disjunction occurs.
    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Not(a) => a.is_quantifier_free(),
            _ => false,
        }
    }

    /// Number of nodes, counting terms as one.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::DefNum(..) | Formula::DefFun(..) => 1,
            Formula::And(a, b) | Formula::Imp(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Not(a)
            | Formula::ForallNum(_, a)
            | Formula::ForallFun(_, a)
            | Formula::ExistsNum(_, a)
            | Formula::ExistsFun(_, a)
            | Formula::ExistsNumBdd(_, _, a)
            | Formula::ExistsFunBdd(_, _, a) => 1 + a.size(),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha::formula(self, other, &mut alpha::Scope::default())
    }
}

impl NumTerm {
    pub fn alpha_eq(&self, other: &NumTerm) -> bool {
        alpha::num(self, other, &mut alpha::Scope::default())
    }
}

impl FunTerm {
    pub fn alpha_eq(&self, other: &FunTerm) -> bool {
        alpha::fun(self, other, &mut alpha::Scope::default())
    }
}

/// Supply of variable names distinct from a reserved set.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    used: HashSet<String>,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn avoiding<'a>(names: impl IntoIterator<Item = &'a String>) -> Self {
        Fresh { used: names.into_iter().cloned().collect() }
    }

    pub fn reserve(&mut self, name: impl Into<String>) {
        self.used.insert(name.into());
    }

    pub fn reserve_formula(&mut self, f: &Formula) {
        self.used.extend(f.names());
    }

    pub fn reserve_term(&mut self, t: &Term) {
        match t {
            Term::Num(t) => t.collect_names(&mut self.used),
            Term::Fun(f) => f.collect_names(&mut self.used),
        }
    }

    pub fn reserve_fun_term(&mut self, f: &FunTerm) {
        f.collect_names(&mut self.used);
    }

    pub fn reserve_num_term(&mut self, t: &NumTerm) {
        t.collect_names(&mut self.used);
    }

    /// `base` itself when unused, otherwise `base_1`, `base_2`, ...
    pub fn fresh(&mut self, base: &str) -> String {
        let stem = match base.rfind('_') {
            Some(i) if base[i + 1..].chars().all(|c| c.is_ascii_digit()) && i > 0 => &base[..i],
            _ => base,
        };
        let mut candidate = base.to_string();
        let mut k = 1u64;
        while self.used.contains(&candidate) {
            candidate = format!("{stem}_{k}");
            k += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

mod alpha {
    use super::{Formula, FunTerm, NumTerm};

    /// Parallel stacks of bound names, one per side and sort.
    #[derive(Default)]
    pub(super) struct Scope {
        num: Vec<(String, String)>,
        fun: Vec<(String, String)>,
    }

    fn lookup(stack: &[(String, String)], a: &str, b: &str) -> bool {
        for (x, y) in stack.iter().rev() {
            if x == a || y == b {
                return x == a && y == b;
            }
        }
        a == b
    }

    pub(super) fn num(a: &NumTerm, b: &NumTerm, s: &mut Scope) -> bool {
        match (a, b) {
            (NumTerm::Var(x), NumTerm::Var(y)) => lookup(&s.num, x, y),
            (NumTerm::Zero, NumTerm::Zero) => true,
            (NumTerm::App(f, xs), NumTerm::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| num(x, y, s))
            }
            (NumTerm::Eval(f, x), NumTerm::Eval(g, y)) => fun(f, g, s) && num(x, y, s),
            _ => false,
        }
    }

    pub(super) fn fun(a: &FunTerm, b: &FunTerm, s: &mut Scope) -> bool {
        match (a, b) {
            (FunTerm::Var(x), FunTerm::Var(y)) => lookup(&s.fun, x, y),
            (FunTerm::Succ, FunTerm::Succ) => true,
            (FunTerm::Lambda(x, t), FunTerm::Lambda(y, u)) => {
                s.num.push((x.clone(), y.clone()));
                let r = num(t, u, s);
                s.num.pop();
                r
            }
            (FunTerm::Rec(t, f), FunTerm::Rec(u, g)) => num(t, u, s) && fun(f, g, s),
            _ => false,
        }
    }

    fn bind_num(x: &str, y: &str, a: &Formula, b: &Formula, s: &mut Scope) -> bool {
        s.num.push((x.to_string(), y.to_string()));
        let r = formula(a, b, s);
        s.num.pop();
        r
    }

    fn bind_fun(x: &str, y: &str, a: &Formula, b: &Formula, s: &mut Scope) -> bool {
        s.fun.push((x.to_string(), y.to_string()));
        let r = formula(a, b, s);
        s.fun.pop();
        r
    }

    pub(super) fn formula(a: &Formula, b: &Formula, s: &mut Scope) -> bool {
        use Formula::*;
        match (a, b) {
            (Eq(a1, a2), Eq(b1, b2)) => num(a1, b1, s) && num(a2, b2, s),
            (DefNum(a1, a2), DefNum(b1, b2)) | (DefFun(a1, a2), DefFun(b1, b2)) => {
                fun(a1, b1, s) && fun(a2, b2, s)
            }
            (And(a1, a2), And(b1, b2))
            | (Imp(a1, a2), Imp(b1, b2))
            | (Or(a1, a2), Or(b1, b2))
            | (Iff(a1, a2), Iff(b1, b2)) => formula(a1, b1, s) && formula(a2, b2, s),
            (Not(x), Not(y)) => formula(x, y, s),
            (ForallNum(x, p), ForallNum(y, q)) | (ExistsNum(x, p), ExistsNum(y, q)) => {
                bind_num(x, y, p, q, s)
            }
            (ForallFun(x, p), ForallFun(y, q)) | (ExistsFun(x, p), ExistsFun(y, q)) => {
                bind_fun(x, y, p, q, s)
            }
            (ExistsNumBdd(x, t, p), ExistsNumBdd(y, u, q)) => num(t, u, s) && bind_num(x, y, p, q, s),
            (ExistsFunBdd(x, t, p), ExistsFunBdd(y, u, q)) => fun(t, u, s) && bind_fun(x, y, p, q, s),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_examples() {
        let f = Formula::eq(NumTerm::var("x"), NumTerm::Zero);
        let fv = f.free_vars();
        assert_eq!(fv.num.iter().collect::<Vec<_>>(), vec!["x"]);
        assert!(fv.fun.is_empty());

        let g = Formula::forall_num(
            "x",
            Formula::eq(NumTerm::var("x"), FunTerm::var("xi").at(NumTerm::Zero)),
        );
        let fv = g.free_vars();
        assert!(fv.num.is_empty());
        assert_eq!(fv.fun.iter().collect::<Vec<_>>(), vec!["xi"]);
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::forall_num("x", Formula::eq(NumTerm::var("x"), NumTerm::var("y")));
        let b = Formula::forall_num("z", Formula::eq(NumTerm::var("z"), NumTerm::var("y")));
        let c = Formula::forall_num("y", Formula::eq(NumTerm::var("y"), NumTerm::var("y")));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn numerals() {
        assert_eq!(NumTerm::numeral(3).as_numeral(), Some(3));
        assert_eq!(NumTerm::var("x").succ().as_numeral(), None);
    }

    #[test]
    fn fresh_names_skip_used() {
        let mut fresh = Fresh::new();
        fresh.reserve("b");
        fresh.reserve("b_1");
        assert_eq!(fresh.fresh("b"), "b_2");
        assert_eq!(fresh.fresh("c"), "c");
        assert_eq!(fresh.fresh("c"), "c_1");
    }
}
