use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{eval_num, eval_qf, universal_prefix, Checker, Environment, WitnessError};
use crate::classify::{bounded_expansion, check, BoundedExpansion};
use crate::compact::CompactCode;
use crate::formula::Formula;
use crate::k2::{associate_of, cons, pack_seq, pair_fun, Baire, ContinuousMap, EvalFault};
use crate::nat::{nat, Nat};
use crate::translate::Mode;

/// A stand-in element for a construction that failed inside a lazy family.
fn faulting(e: WitnessError) -> Baire {
    let fault = e.into_fault();
    Baire::new("unrealized", move |_| Err(fault.clone()))
}

/// Tuples in `[0, l]^k` with largest entry `l`; for `k = 0` only the empty
/// tuple, at level 0.
fn tuples_at_level(k: usize, l: u64) -> Vec<Vec<u64>> {
    if k == 0 {
        return if l == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut t = vec![0u64; k];
    loop {
        if t.contains(&l) {
            out.push(t.clone());
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            if t[i] < l {
                t[i] += 1;
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

fn bind_all(env: &Environment, vars: &[String], values: &[u64]) -> Environment {
    let mut e = env.clone();
    for (z, v) in vars.iter().zip(values) {
        e.set_num(z.clone(), nat(*v));
    }
    e
}

/// `∃z̄ < m ¬A(z̄)`, scanning levels in order and remembering the first failure
/// per key.
struct FailureScan {
    quants: Vec<String>,
    matrix: Formula,
    /// key ↦ (levels scanned, failed)
    memo: Mutex<HashMap<Nat, (u64, bool)>>,
}

impl FailureScan {
    fn fails_below(&self, key: &Nat, env: &Environment, m: u64) -> Result<bool, EvalFault> {
        let (mut scanned, mut failed) = self.memo.lock().unwrap().get(key).copied().unwrap_or((0, false));
        while !failed && scanned < m {
            for z in tuples_at_level(self.quants.len(), scanned) {
                if !eval_qf(&self.matrix, &bind_all(env, &self.quants, &z))? {
                    failed = true;
                    break;
                }
            }
            scanned += 1;
        }
        self.memo.lock().unwrap().insert(key.clone(), (scanned, failed));
        Ok(failed)
    }
}

impl Checker {
    /// Nonemptiness of witness sets is certified to this depth, both here and
    /// when a compact realizer is checked.
    pub fn confirm_depth(&self) -> u64 {
        self.bounds.depth + self.bounds.fan_depth
    }

    /// The canonical realizer `ω_f` of a formula in the self-realizing class,
    /// built from the clauses of `f` and the witnesses found in `env`.
    pub fn build_omega(&self, f: &Formula, env: &Environment) -> Result<Baire, WitnessError> {
        self.covered(f, env)?;
        check(f, self.self_realizing_class()).map_err(WitnessError::NotInClass)?;
        self.omega_core(&f.desugar(), env)
    }

    pub(crate) fn omega_core(&self, f: &Formula, env: &Environment) -> Result<Baire, WitnessError> {
        use Formula::*;
        match f {
            Eq(..) => Ok(Baire::zeros()),
            And(a, b) => Ok(pair_fun(&self.omega_core(a, env)?, &self.omega_core(b, env)?)),
            Imp(a, b) => {
                let concl = match self.omega_core(b, env) {
                    Ok(w) => w,
                    // no realizer of a false hypothesis exists, so any value will do
                    Err(_) if self.truth(a, env) == super::Truth::False => Baire::zeros(),
                    Err(e) => return Err(e),
                };
                Ok(associate_of(&ContinuousMap::constant(concl)))
            }
            ForallNum(x, a) => {
                let (me, a, env, x) = (self.clone(), Arc::new((**a).clone()), env.clone(), x.clone());
                Ok(pack_seq(format!("ω∀{x}"), move |m| {
                    me.omega_core(&a, &env.with_num(&x, nat(m))).unwrap_or_else(faulting)
                }))
            }
            ForallFun(xi, a) => {
                let (me, a, env, xi) = (self.clone(), Arc::new((**a).clone()), env.clone(), xi.clone());
                let label = format!("ω∀{xi}");
                let map = ContinuousMap::traced(label, move |probe: &Baire, n: &Nat| {
                    let w = me.omega_core(&a, &env.with_fun(&xi, probe.clone())).map_err(WitnessError::into_fault)?;
                    w.get(n)
                });
                Ok(associate_of(&map))
            }
            ExistsNum(x, a) => {
                if self.mode == Mode::Lifschitz {
                    if let Some(b @ BoundedExpansion::Num { .. }) = bounded_expansion(f) {
                        if let Some((quants, matrix)) = universal_prefix(b.body()) {
                            return self.bounded_num_realizer(&b, a, quants, matrix, env);
                        }
                    }
                }
                let w = self.least_witness(x, a, env)?;
                let member = cons(w.clone(), &self.omega_core(a, &env.with_num(x, w))?);
                Ok(self.wrap_witness(member))
            }
            ExistsFun(xi, a) => {
                if self.mode == Mode::Lifschitz {
                    if let Some(b @ BoundedExpansion::Fun { .. }) = bounded_expansion(f) {
                        if let Some((quants, matrix)) = universal_prefix(b.body()) {
                            return self.bounded_fun_realizer(&b, a, &quants, matrix, env);
                        }
                    }
                }
                if !a.is_quantifier_free() {
                    return Err(WitnessError::NotCertified(f.to_string()));
                }
                for (_, b) in self.battery.elements() {
                    let env2 = env.with_fun(xi, b.clone());
                    if eval_qf(a, &env2)? {
                        let member = pair_fun(b, &self.omega_core(a, &env2)?);
                        return Ok(self.wrap_witness(member));
                    }
                }
                Err(WitnessError::NotCertified(f.to_string()))
            }
            _ => self.omega_core(&f.desugar(), env),
        }
    }

    /// The realizer itself for the Kleene interpretation, its singleton set for
    /// the Lifschitz one.
    fn wrap_witness(&self, member: Baire) -> Baire {
        match self.mode {
            Mode::Kleene => member,
            Mode::Lifschitz => CompactCode::singleton(&member).code,
        }
    }

    fn least_witness(&self, x: &str, a: &Formula, env: &Environment) -> Result<Nat, WitnessError> {
        if !a.is_quantifier_free() {
            return Err(WitnessError::NotCertified(Formula::exists_num(x, a.clone()).to_string()));
        }
        for w in 0..=self.bounds.search {
            if eval_qf(a, &env.with_num(x, nat(w)))? {
                return Ok(nat(w));
            }
        }
        Err(WitnessError::NotCertified(Formula::exists_num(x, a.clone()).to_string()))
    }

    fn certified(&self, code: CompactCode, f: &Formula) -> Result<Baire, WitnessError> {
        match code.leftmost_path(self.confirm_depth())? {
            Some(_) => Ok(code.code),
            None => Err(WitnessError::NotCertified(f.to_string())),
        }
    }

    /// `∃x ≤ t ∀z̄ A`: the set of `⟨x⟩⌢ω` with `x ≤ t` and `A(x, z̄)` for all `z̄`.
    /// Its test rejects a node of length `m` whose `x` fails `A` at some `z̄ < m`.
    fn bounded_num_realizer(
        &self,
        b: &BoundedExpansion<'_>,
        scope: &Formula,
        quants: Vec<String>,
        matrix: &Formula,
        env: &Environment,
    ) -> Result<Baire, WitnessError> {
        let BoundedExpansion::Num { var, bound, .. } = *b else { unreachable!() };
        let t = eval_num(bound, env)?;
        let rest = self.omega_core(scope, &env.with_num(var, nat(0)))?;
        let scan = Arc::new(FailureScan { quants, matrix: matrix.clone(), memo: Mutex::new(HashMap::new()) });
        let (env2, x, tail) = (env.clone(), var.to_string(), rest.clone());
        let code = CompactCode::from_test(&format!("∃{x}≤{t}"), cons(t.clone(), &rest), move |s| {
            let Some((w, after)) = s.split_first() else { return Ok(true) };
            for (i, v) in after.iter().enumerate() {
                if *v != tail.at(i as u64)? {
                    return Ok(false);
                }
            }
            Ok(!scan.fails_below(w, &env2.with_num(&x, w.clone()), s.len() as u64)?)
        });
        let code = code.with_completion(move |s| Ok(s.first().map(|w| cons(w.clone(), &rest))));
        let f = Formula::ExistsNum(var.to_string(), Box::new(scope.clone()));
        self.certified(code, &f)
    }

    /// The tree of `ξ ≤ τ` whose nodes `ξ̄m` do not refute `A(ξ, z̄)` for any
    /// `z̄ < m`; values of `A` that read past the node do not count.
    pub(crate) fn witness_tree(
        &self,
        b: &BoundedExpansion<'_>,
        quants: &[String],
        matrix: &Formula,
        env: &Environment,
    ) -> CompactCode {
        let BoundedExpansion::Fun { var, index, bound, .. } = *b else { unreachable!() };
        let (benv, index, bound) = (env.clone(), index.to_string(), bound.clone());
        let tau = Baire::new(format!("τ:{bound}"), move |n| eval_num(&bound, &benv.with_num(&index, n.clone())));
        let (env, xi, quants, matrix) = (env.clone(), var.to_string(), quants.to_vec(), matrix.clone());
        CompactCode::from_test(&format!("tree:{xi}"), tau, move |s| {
            let (probe, id) = Baire::probe(s.to_vec());
            let env2 = env.with_fun(&xi, probe);
            let m = s.len() as u64;
            for l in 0..m.max(1) {
                for z in tuples_at_level(quants.len(), l) {
                    match eval_qf(&matrix, &bind_all(&env2, &quants, &z)) {
                        Ok(false) => return Ok(false),
                        Ok(true) => {}
                        Err(EvalFault::OutOfPrefix { probe, .. }) if probe == id => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok(true)
        })
    }

    /// `∃ξ ≤ τ ∀z̄ A`: the set of `⟨ξ, ω⟩` with `ξ` a path of the witness tree.
    /// Members are completed by the greedy leftmost path through the tree.
    fn bounded_fun_realizer(
        &self,
        b: &BoundedExpansion<'_>,
        scope: &Formula,
        quants: &[String],
        matrix: &Formula,
        env: &Environment,
    ) -> Result<Baire, WitnessError> {
        let BoundedExpansion::Fun { var, .. } = *b else { unreachable!() };
        let tree = self.witness_tree(b, quants, matrix, env);
        // the realizer of `∀n ξ(n) ≤ τ(n) ∧ ∀z̄ A` does not depend on ξ
        let rest = self.omega_core(scope, &env.with_fun(var, Baire::zeros()))?;
        let (t2, tail) = (tree.clone(), rest.clone());
        let bound = pair_fun(&tree.bound_elem(), &rest);
        let code = CompactCode::from_test(&format!("∃{var}≤τ"), bound, move |s| {
            let evens: Vec<Nat> = s.iter().step_by(2).cloned().collect();
            for (i, v) in s.iter().skip(1).step_by(2).enumerate() {
                if *v != tail.at(i as u64)? {
                    return Ok(false);
                }
            }
            t2.admissible(&evens)
        });
        let t3 = tree.clone();
        let code = code.with_completion(move |s| {
            let evens: Vec<Nat> = s.iter().step_by(2).cloned().collect();
            Ok(Some(pair_fun(&t3.greedy_member(evens), &rest)))
        });
        let f = Formula::ExistsFun(var.to_string(), Box::new(scope.clone()));
        self.certified(code, &f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_cover_the_cube_once() {
        for k in 0..4 {
            let mut all: Vec<Vec<u64>> = (0..4).flat_map(|l| tuples_at_level(k, l)).collect();
            all.sort();
            let n = all.len();
            all.dedup();
            assert_eq!(all.len(), n);
            assert_eq!(n, 4usize.pow(k as u32).max(1));
        }
    }
}
