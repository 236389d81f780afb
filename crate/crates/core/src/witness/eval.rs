use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use crate::formula::{Formula, FunTerm, NumTerm};
use crate::k2::{Baire, EvalFault};
use crate::nat::Nat;
use crate::symbols::SymbolError;

/// Largest argument at which a recursor is iterated.
pub const REC_LIMIT: u64 = 1 << 16;

/// Values for the free variables of a formula.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    nums: BTreeMap<String, Nat>,
    funs: BTreeMap<String, Baire>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_num(&self, x: &str, v: Nat) -> Self {
        let mut e = self.clone();
        e.nums.insert(x.to_string(), v);
        e
    }

    pub fn with_fun(&self, xi: &str, v: Baire) -> Self {
        let mut e = self.clone();
        e.funs.insert(xi.to_string(), v);
        e
    }

    pub fn set_num(&mut self, x: impl Into<String>, v: Nat) {
        self.nums.insert(x.into(), v);
    }

    pub fn set_fun(&mut self, xi: impl Into<String>, v: Baire) {
        self.funs.insert(xi.into(), v);
    }

    pub fn num(&self, x: &str) -> Option<&Nat> {
        self.nums.get(x)
    }

    pub fn fun(&self, xi: &str) -> Option<&Baire> {
        self.funs.get(xi)
    }

    /// Free variables of `f` without a value, numbers first.
    pub fn missing(&self, f: &Formula) -> Vec<String> {
        let fv = f.free_vars();
        let nums = fv.num.into_iter().filter(|x| !self.nums.contains_key(x));
        let funs = fv.fun.into_iter().filter(|x| !self.funs.contains_key(x));
        nums.chain(funs).collect()
    }
}

fn symbol_fault(e: SymbolError) -> EvalFault {
    EvalFault::Overflow(e.to_string())
}

struct Eval<'e> {
    env: &'e Environment,
    /// λ-bound variables, innermost last.
    locals: Vec<(String, Nat)>,
}

impl Eval<'_> {
    fn var(&self, x: &str) -> Result<Nat, EvalFault> {
        if let Some((_, v)) = self.locals.iter().rev().find(|(y, _)| y == x) {
            return Ok(v.clone());
        }
        self.env.num(x).cloned().ok_or_else(|| EvalFault::Other(format!("no value for `{x}`")))
    }

    fn num(&mut self, t: &NumTerm) -> Result<Nat, EvalFault> {
        match t {
            NumTerm::Var(x) => self.var(x),
            NumTerm::Zero => Ok(Nat::zero()),
            NumTerm::App(sym, args) => {
                let vals = args.iter().map(|a| self.num(a)).collect::<Result<Vec<_>, _>>()?;
                sym.eval(&vals).map_err(symbol_fault)
            }
            NumTerm::Eval(f, arg) => {
                let v = self.num(arg)?;
                self.fun_at(f, v)
            }
        }
    }

    fn fun_at(&mut self, f: &FunTerm, v: Nat) -> Result<Nat, EvalFault> {
        match f {
            FunTerm::Var(xi) => self
                .env
                .fun(xi)
                .ok_or_else(|| EvalFault::Other(format!("no value for `{xi}`")))?
                .get(&v),
            FunTerm::Succ => Ok(v + 1u32),
            FunTerm::Lambda(x, body) => {
                self.locals.push((x.clone(), v));
                let r = self.num(body);
                self.locals.pop();
                r
            }
            FunTerm::Rec(start, step) => {
                let n = v
                    .to_u64()
                    .filter(|&n| n <= REC_LIMIT)
                    .ok_or_else(|| EvalFault::Overflow(format!("recursor iterated {v} times")))?;
                let mut acc = self.num(start)?;
                for _ in 0..n {
                    acc = self.fun_at(step, acc)?;
                }
                Ok(acc)
            }
        }
    }
}

pub fn eval_num(t: &NumTerm, env: &Environment) -> Result<Nat, EvalFault> {
    Eval { env, locals: Vec::new() }.num(t)
}

/// `f(v)`
pub fn eval_fun_at(f: &FunTerm, v: Nat, env: &Environment) -> Result<Nat, EvalFault> {
    Eval { env, locals: Vec::new() }.fun_at(f, v)
}

/// Truth of a quantifier-free core formula.
pub fn eval_qf(f: &Formula, env: &Environment) -> Result<bool, EvalFault> {
    match f {
        Formula::Eq(a, b) => Ok(eval_num(a, env)? == eval_num(b, env)?),
        Formula::And(a, b) => Ok(eval_qf(a, env)? && eval_qf(b, env)?),
        Formula::Imp(a, b) => Ok(!eval_qf(a, env)? || eval_qf(b, env)?),
        Formula::Not(a) => Ok(!eval_qf(a, env)?),
        Formula::Iff(a, b) => Ok(eval_qf(a, env)? == eval_qf(b, env)?),
        _ => Err(EvalFault::Other(format!("not quantifier-free: {f}"))),
    }
}
