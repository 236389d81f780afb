use thiserror::Error;

use super::{Formula, Fresh, FunTerm, NumTerm, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("cannot substitute a {term} term for the {var} variable `{name}`")]
    SortMismatch { name: String, var: &'static str, term: &'static str },
}

/// One substitution `v := t` with the free variables of `t` precomputed.
struct Subst<'a> {
    var: &'a Var,
    term: &'a Term,
    term_free: super::FreeVars,
    fresh: Fresh,
}

impl<'a> Subst<'a> {
    fn new(var: &'a Var, term: &'a Term, fresh: Fresh) -> Self {
        Subst { var, term, term_free: term.free_vars(), fresh }
    }

    fn num(&mut self, t: &NumTerm) -> NumTerm {
        match t {
            NumTerm::Var(x) => match (self.var, self.term) {
                (Var::Num(v), Term::Num(s)) if v == x => s.clone(),
                _ => t.clone(),
            },
            NumTerm::Zero => NumTerm::Zero,
            NumTerm::App(f, args) => NumTerm::App(*f, args.iter().map(|a| self.num(a)).collect()),
            NumTerm::Eval(f, a) => NumTerm::Eval(Box::new(self.fun(f)), Box::new(self.num(a))),
        }
    }

    fn fun(&mut self, f: &FunTerm) -> FunTerm {
        match f {
            FunTerm::Var(x) => match (self.var, self.term) {
                (Var::Fun(v), Term::Fun(s)) if v == x => s.clone(),
                _ => f.clone(),
            },
            FunTerm::Succ => FunTerm::Succ,
            FunTerm::Lambda(x, body) => {
                let (x, body) = self.under_num_binder_term(x, body);
                FunTerm::Lambda(x, Box::new(body))
            }
            FunTerm::Rec(t, g) => FunTerm::Rec(Box::new(self.num(t)), Box::new(self.fun(g))),
        }
    }

    fn under_num_binder_term(&mut self, x: &str, body: &NumTerm) -> (String, NumTerm) {
        let free = body.free_vars();
        if matches!(self.var, Var::Num(v) if v == x) || !free.contains(self.var) {
            return (x.to_string(), body.clone());
        }
        if self.term_free.num.contains(x) {
            let y = self.fresh.fresh(x);
            let renamed = body.subst_num(x, &NumTerm::Var(y.clone()));
            let out = self.num(&renamed);
            (y, out)
        } else {
            (x.to_string(), self.num(body))
        }
    }

    /// Pushes the substitution under a binder, renaming it if it would capture.
    fn under_binder(&mut self, bound: Var, body: &Formula) -> (String, Formula) {
        let name = bound.name().to_string();
        if bound == *self.var || !body.free_vars().contains(self.var) {
            return (name, body.clone());
        }
        if self.term_free.contains(&bound) {
            let y = self.fresh.fresh(&name);
            let renamed = match &bound {
                Var::Num(_) => body.subst_num(&name, &NumTerm::Var(y.clone())),
                Var::Fun(_) => body.subst_fun(&name, &FunTerm::Var(y.clone())),
            };
            (y, self.formula(&renamed))
        } else {
            (name, self.formula(body))
        }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        use Formula::*;
        match f {
            Eq(a, b) => Eq(self.num(a), self.num(b)),
            DefNum(a, b) => DefNum(self.fun(a), self.fun(b)),
            DefFun(a, b) => DefFun(self.fun(a), self.fun(b)),
            And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Imp(a, b) => Formula::imp(self.formula(a), self.formula(b)),
            Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Iff(a, b) => Formula::iff(self.formula(a), self.formula(b)),
            Not(a) => Formula::not(self.formula(a)),
            ForallNum(x, a) => {
                let (x, a) = self.under_binder(Var::Num(x.clone()), a);
                Formula::forall_num(x, a)
            }
            ExistsNum(x, a) => {
                let (x, a) = self.under_binder(Var::Num(x.clone()), a);
                Formula::exists_num(x, a)
            }
            ForallFun(x, a) => {
                let (x, a) = self.under_binder(Var::Fun(x.clone()), a);
                Formula::forall_fun(x, a)
            }
            ExistsFun(x, a) => {
                let (x, a) = self.under_binder(Var::Fun(x.clone()), a);
                Formula::exists_fun(x, a)
            }
            ExistsNumBdd(x, t, a) => {
                let t = self.num(t);
                let (x, a) = self.under_binder(Var::Num(x.clone()), a);
                ExistsNumBdd(x, t, Box::new(a))
            }
            ExistsFunBdd(x, t, a) => {
                let t = self.fun(t);
                let (x, a) = self.under_binder(Var::Fun(x.clone()), a);
                ExistsFunBdd(x, t, Box::new(a))
            }
        }
    }
}

/// Contracts every redex `(λx.t)(s)` to `t[x/s]`.
pub(super) mod beta {
    use super::super::{Formula, FunTerm, NumTerm};

    pub fn num(t: &NumTerm) -> NumTerm {
        match t {
            NumTerm::Var(_) | NumTerm::Zero => t.clone(),
            NumTerm::App(f, args) => NumTerm::App(*f, args.iter().map(num).collect()),
            NumTerm::Eval(f, a) => {
                let a = num(a);
                match fun(f) {
                    FunTerm::Lambda(x, body) => num(&body.subst_num(&x, &a)),
                    g => NumTerm::Eval(Box::new(g), Box::new(a)),
                }
            }
        }
    }

    pub fn fun(f: &FunTerm) -> FunTerm {
        match f {
            FunTerm::Var(_) | FunTerm::Succ => f.clone(),
            FunTerm::Lambda(x, body) => FunTerm::Lambda(x.clone(), Box::new(num(body))),
            FunTerm::Rec(t, g) => FunTerm::Rec(Box::new(num(t)), Box::new(fun(g))),
        }
    }

    pub fn formula(f: &Formula) -> Formula {
        use Formula::*;
        let b = |a: &Formula| Box::new(formula(a));
        match f {
            Eq(x, y) => Eq(num(x), num(y)),
            DefNum(x, y) => DefNum(fun(x), fun(y)),
            DefFun(x, y) => DefFun(fun(x), fun(y)),
            And(x, y) => And(b(x), b(y)),
            Imp(x, y) => Imp(b(x), b(y)),
            Or(x, y) => Or(b(x), b(y)),
            Iff(x, y) => Iff(b(x), b(y)),
            Not(x) => Not(b(x)),
            ForallNum(v, x) => ForallNum(v.clone(), b(x)),
            ForallFun(v, x) => ForallFun(v.clone(), b(x)),
            ExistsNum(v, x) => ExistsNum(v.clone(), b(x)),
            ExistsFun(v, x) => ExistsFun(v.clone(), b(x)),
            ExistsNumBdd(v, t, x) => ExistsNumBdd(v.clone(), num(t), b(x)),
            ExistsFunBdd(v, t, x) => ExistsFunBdd(v.clone(), fun(t), b(x)),
        }
    }
}

fn fresh_for_formula(f: &Formula, term: &Term) -> Fresh {
    let mut fresh = Fresh::new();
    fresh.reserve_formula(f);
    fresh.reserve_term(term);
    fresh
}

fn check_sort(var: &Var, term: &Term) -> Result<(), SubstError> {
    match (var, term) {
        (Var::Num(_), Term::Num(_)) | (Var::Fun(_), Term::Fun(_)) => Ok(()),
        (Var::Num(n), Term::Fun(_)) => Err(SubstError::SortMismatch {
            name: n.clone(),
            var: "number",
            term: "function",
        }),
        (Var::Fun(n), Term::Num(_)) => Err(SubstError::SortMismatch {
            name: n.clone(),
            var: "function",
            term: "number",
        }),
    }
}

impl Formula {
    /// Capture-avoiding substitution of `term` for the free occurrences of `var`.
    pub fn substitute(&self, var: &Var, term: &Term) -> Result<Formula, SubstError> {
        check_sort(var, term)?;
        let fresh = fresh_for_formula(self, term);
        Ok(Subst::new(var, term, fresh).formula(self))
    }

    /// The formula with every `(λx.t)(s)` contracted.
    pub fn beta_normal(&self) -> Formula {
        beta::formula(self)
    }

    pub fn subst_num(&self, x: &str, t: &NumTerm) -> Formula {
        let var = Var::Num(x.to_string());
        let term = Term::Num(t.clone());
        let fresh = fresh_for_formula(self, &term);
        Subst::new(&var, &term, fresh).formula(self)
    }

    pub fn subst_fun(&self, x: &str, f: &FunTerm) -> Formula {
        let var = Var::Fun(x.to_string());
        let term = Term::Fun(f.clone());
        let fresh = fresh_for_formula(self, &term);
        Subst::new(&var, &term, fresh).formula(self)
    }
}

impl NumTerm {
    pub fn beta_normal(&self) -> NumTerm {
        beta::num(self)
    }

    pub fn subst_num(&self, x: &str, t: &NumTerm) -> NumTerm {
        let var = Var::Num(x.to_string());
        let term = Term::Num(t.clone());
        let mut fresh = Fresh::new();
        fresh.reserve_num_term(self);
        fresh.reserve_term(&term);
        Subst::new(&var, &term, fresh).num(self)
    }

    pub fn subst_fun(&self, x: &str, f: &FunTerm) -> NumTerm {
        let var = Var::Fun(x.to_string());
        let term = Term::Fun(f.clone());
        let mut fresh = Fresh::new();
        fresh.reserve_num_term(self);
        fresh.reserve_term(&term);
        Subst::new(&var, &term, fresh).num(self)
    }
}

impl FunTerm {
    pub fn beta_normal(&self) -> FunTerm {
        beta::fun(self)
    }

    pub fn subst_num(&self, x: &str, t: &NumTerm) -> FunTerm {
        let var = Var::Num(x.to_string());
        let term = Term::Num(t.clone());
        let mut fresh = Fresh::new();
        fresh.reserve_fun_term(self);
        fresh.reserve_term(&term);
        Subst::new(&var, &term, fresh).fun(self)
    }

    pub fn subst_fun(&self, x: &str, f: &FunTerm) -> FunTerm {
        let var = Var::Fun(x.to_string());
        let term = Term::Fun(f.clone());
        let mut fresh = Fresh::new();
        fresh.reserve_fun_term(self);
        fresh.reserve_term(&term);
        Subst::new(&var, &term, fresh).fun(self)
    }
}
