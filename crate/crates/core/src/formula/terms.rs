//! Builders for the function and number terms used by the encodings: pair
//! projections, shift, components of packed sequences, `⟨n⟩⌢f` and prefix codes.
//!
//! Every λ-binder is chosen to avoid the free variables of the arguments, so the
//! results can be spliced anywhere without capture.

use super::{Fresh, FunTerm, NumTerm};

fn binder(base: &str, avoid: &[&dyn Names]) -> String {
    let mut fresh = Fresh::new();
    for a in avoid {
        a.reserve_in(&mut fresh);
    }
    fresh.fresh(base)
}

trait Names {
    fn reserve_in(&self, fresh: &mut Fresh);
}

impl Names for FunTerm {
    fn reserve_in(&self, fresh: &mut Fresh) {
        fresh.reserve_fun_term(self);
    }
}

impl Names for NumTerm {
    fn reserve_in(&self, fresh: &mut Fresh) {
        fresh.reserve_num_term(self);
    }
}

fn two() -> NumTerm {
    NumTerm::numeral(2)
}

pub fn mul(a: NumTerm, b: NumTerm) -> NumTerm {
    NumTerm::sym("mul", vec![a, b])
}

pub fn add(a: NumTerm, b: NumTerm) -> NumTerm {
    NumTerm::sym("add", vec![a, b])
}

/// `λn.f(2n)`
pub fn fst_of(f: &FunTerm) -> FunTerm {
    let n = binder("n", &[f]);
    FunTerm::lambda(n.clone(), f.at(mul(two(), NumTerm::var(n))))
}

/// `λn.f(2n+1)`
pub fn snd_of(f: &FunTerm) -> FunTerm {
    let n = binder("n", &[f]);
    FunTerm::lambda(n.clone(), f.at(mul(two(), NumTerm::var(n)).succ()))
}

/// `λn.f(n+1)`
pub fn shift_of(f: &FunTerm) -> FunTerm {
    let n = binder("n", &[f]);
    FunTerm::lambda(n.clone(), f.at(NumTerm::var(n).succ()))
}

/// `λk.f(2^m(2k+1)−1)`, the `m`-th function packed in `f`. Numeral indices are
/// folded: `m = 0` gives `λk.f(2k)` and `m > 0` gives `λk.f(2^{m+1}k + 2^m − 1)`.
pub fn component(f: &FunTerm, m: &NumTerm) -> FunTerm {
    let k = binder("k", &[f, m]);
    let kv = NumTerm::var(k.clone());
    let index = match m.as_numeral() {
        Some(0) => mul(two(), kv),
        // keep the folded numerals small
        Some(e) if e < 12 => add(
            mul(NumTerm::numeral(1 << (e + 1)), kv),
            NumTerm::numeral((1 << e) - 1),
        ),
        _ => general_component_index(m.clone(), kv),
    };
    FunTerm::lambda(k, f.at(index))
}

fn general_component_index(m: NumTerm, k: NumTerm) -> NumTerm {
    let odd = mul(two(), k).succ();
    NumTerm::sym(
        "sub",
        vec![mul(NumTerm::sym("pow2", vec![m]), odd), NumTerm::numeral(1)],
    )
}

/// `⟨n⟩⌢f` as `λj.cond(j, n, f(j−1))`.
pub fn cons_term(n: &NumTerm, f: &FunTerm) -> FunTerm {
    let j = binder("j", &[n, f]);
    let jv = NumTerm::var(j.clone());
    let tail = f.at(NumTerm::sym("pred", vec![jv.clone()]));
    FunTerm::lambda(j, NumTerm::sym("cond", vec![jv, n.clone(), tail]))
}

/// The code of `f̄n`, the first `n` values of `f`. The recursor runs on states
/// `pair(m, code of f̄m)`.
pub fn prefix_code(f: &FunTerm, n: &NumTerm) -> NumTerm {
    let p = binder("p", &[f, n]);
    let pv = NumTerm::var(p.clone());
    let m = NumTerm::sym("unpair-l", vec![pv.clone()]);
    let code = NumTerm::sym("unpair-r", vec![pv]);
    let step = FunTerm::lambda(
        p,
        NumTerm::sym(
            "pair",
            vec![m.clone().succ(), NumTerm::sym("snoc", vec![code, f.at(m)])],
        ),
    );
    let run = FunTerm::Rec(Box::new(NumTerm::Zero), Box::new(step));
    NumTerm::sym("unpair-r", vec![run.at(n.clone())])
}

/// The number of `m < n` with `α(β̄m) ≠ 0`.
pub fn nonzero_count(alpha: &FunTerm, beta: &FunTerm, n: &NumTerm) -> NumTerm {
    let p = binder("p", &[alpha, beta, n]);
    let pv = NumTerm::var(p.clone());
    let m = NumTerm::sym("unpair-l", vec![pv.clone()]);
    let acc = NumTerm::sym("unpair-r", vec![pv]);
    let hit = NumTerm::sym("sg", vec![alpha.at(prefix_code(beta, &m))]);
    let step = FunTerm::lambda(
        p,
        NumTerm::sym("pair", vec![m.succ(), add(acc, hit)]),
    );
    let run = FunTerm::Rec(Box::new(NumTerm::Zero), Box::new(step));
    NumTerm::sym("unpair-r", vec![run.at(n.clone())])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_index_folding() {
        let xi = FunTerm::var("xi");
        let c0 = component(&xi, &NumTerm::Zero);
        assert_eq!(c0.to_string(), "(lam k (ev xi (app mul 2 k)))");
        let c1 = component(&xi, &NumTerm::numeral(1));
        assert_eq!(c1.to_string(), "(lam k (ev xi (app add (app mul 4 k) 1)))");
    }

    #[test]
    fn binders_avoid_argument_variables() {
        let f = FunTerm::lambda("q", FunTerm::var("n").at(NumTerm::var("n")));
        let g = fst_of(&f);
        match g {
            FunTerm::Lambda(b, _) => assert_ne!(b, "n"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
