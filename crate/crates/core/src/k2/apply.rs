use serde::Serialize;
use thiserror::Error;

use super::{constant_map_value, cons, Baire, EvalFault};
use crate::nat::{self, Nat};

/// Outcome of a fuel-bounded application `α(β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PartialResult {
    /// `α(β) = value`, decided after reading `used` values of `β`.
    Defined {
        #[serde(serialize_with = "crate::nat::serialize_nat")]
        value: Nat,
        used: u64,
    },
    FuelExhausted { fuel: u64 },
}

impl PartialResult {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            PartialResult::Defined { value, .. } => Some(value),
            PartialResult::FuelExhausted { .. } => None,
        }
    }
}

/// `α(β)`: the least `n ≤ fuel` with `α(β̄n) ≠ 0` gives the value `α(β̄n) − 1`.
pub fn apply_num(alpha: &Baire, beta: &Baire, fuel: u64) -> Result<PartialResult, EvalFault> {
    let mut code = nat::empty_code();
    for n in 0..=fuel {
        let v = alpha.get(&code)?;
        if v != Nat::from(0u32) {
            return Ok(PartialResult::Defined { value: v - 1u32, used: n });
        }
        if n < fuel {
            code = nat::snoc(&code, &beta.at(n)?);
        }
    }
    Ok(PartialResult::FuelExhausted { fuel })
}

/// `α|β = λn.α(⟨n⟩⌢β)`, evaluated lazily with the given fuel per position.
/// A position where the application is undefined within fuel faults.
///
/// The associate of a constant map answers at the first prefix, so with
/// `fuel ≥ 1` the application is that constant.
pub fn apply_fun(alpha: &Baire, beta: &Baire, fuel: u64) -> Baire {
    if let Some(c) = constant_map_value(alpha).filter(|_| fuel >= 1) {
        return c.clone();
    }
    let (a, b) = (alpha.clone(), beta.clone());
    Baire::new(format!("({}|{})", alpha.label(), beta.label()), move |n| {
        match apply_num(&a, &cons(n.clone(), &b), fuel)? {
            PartialResult::Defined { value, .. } => Ok(value),
            PartialResult::FuelExhausted { fuel } => {
                Err(EvalFault::FuelExhausted { position: n.clone(), fuel })
            }
        }
    })
}

/// Whether `α|β` is defined at every position below `depth` within `fuel`.
/// Faults other than fuel exhaustion propagate.
pub fn defined_to_depth(alpha: &Baire, beta: &Baire, fuel: u64, depth: u64) -> Result<bool, EvalFault> {
    if constant_map_value(alpha).is_some() && fuel >= 1 {
        return Ok(true);
    }
    for n in 0..depth {
        match apply_num(alpha, &cons(Nat::from(n), beta), fuel)? {
            PartialResult::Defined { .. } => {}
            PartialResult::FuelExhausted { .. } => return Ok(false),
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("application undefined within fuel {0}")]
    Undefined(u64),
    #[error(transparent)]
    Fault(#[from] EvalFault),
}

/// Number of positions of `β` read to decide `α(β)`.
pub fn use_trace(alpha: &Baire, beta: &Baire, fuel: u64) -> Result<u64, TraceError> {
    match apply_num(alpha, beta, fuel)? {
        PartialResult::Defined { used, .. } => Ok(used),
        PartialResult::FuelExhausted { fuel } => Err(TraceError::Undefined(fuel)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k2::{associate_of, ContinuousMap};
    use crate::nat::nat;

    #[test]
    fn constant_alpha_is_defined_at_once() {
        let r = apply_num(&Baire::constant(6), &Baire::zeros(), 10).unwrap();
        assert_eq!(r, PartialResult::Defined { value: nat(5), used: 0 });
        assert_eq!(use_trace(&Baire::constant(6), &Baire::ones(), 3).unwrap(), 0);
    }

    #[test]
    fn head_reads_first_value() {
        let r = apply_num(&Baire::head(), &Baire::constant(7), 10).unwrap();
        assert_eq!(r, PartialResult::Defined { value: nat(7), used: 1 });
    }

    #[test]
    fn zero_alpha_exhausts_fuel() {
        for fuel in [0, 1, 10, 50] {
            let r = apply_num(&Baire::zeros(), &Baire::identity(), fuel).unwrap();
            assert_eq!(r, PartialResult::FuelExhausted { fuel });
        }
        assert_eq!(use_trace(&Baire::zeros(), &Baire::zeros(), 5), Err(TraceError::Undefined(5)));
    }

    #[test]
    fn constant_one_gives_zero_stream() {
        let g = apply_fun(&Baire::constant(1), &Baire::identity(), 5);
        assert!(g.agrees_to(&Baire::zeros(), 20).unwrap());
    }

    #[test]
    fn head_plus_index_via_associate() {
        let f = ContinuousMap::with_modulus(
            "head+index",
            |_| 1,
            |xi: &Baire, n: &Nat| Ok(xi.at(0)? + n),
        );
        let phi = associate_of(&f);
        let out = apply_fun(&phi, &Baire::constant(2), 10);
        for n in 0..10u64 {
            assert_eq!(out.at(n).unwrap(), nat(2 + n));
        }
    }

    #[test]
    fn application_is_left_associative() {
        // α|β = head for every β, so (α|β)|γ = λn.n while α|(β|γ) = head
        let f = ContinuousMap::with_modulus("to-head", |_| 0, |_: &Baire, n: &Nat| {
            Baire::head().get(n)
        });
        let alpha = associate_of(&f);
        let ab = apply_fun(&alpha, &Baire::zeros(), 10);
        let abc = apply_fun(&ab, &Baire::constant(4), 10);
        assert!(abc.agrees_to(&Baire::identity(), 5).unwrap());
        let a_bc = apply_fun(&alpha, &apply_fun(&Baire::zeros(), &Baire::constant(4), 10), 10);
        assert!(a_bc.agrees_to(&Baire::head(), 5).unwrap());
    }

    #[test]
    fn constant_map_shortcut_matches_scan() {
        let c = Baire::table(&[4, 0, 7], 2);
        let phi = associate_of(&ContinuousMap::constant(c.clone()));
        let beta = Baire::identity();
        let fast = apply_fun(&phi, &beta, 3);
        for n in 0..20u64 {
            let slow = apply_num(&phi, &cons(nat(n), &beta), 3).unwrap();
            assert_eq!(slow, PartialResult::Defined { value: fast.at(n).unwrap(), used: 1 });
        }
        assert_eq!(apply_num(&phi, &cons(nat(0), &beta), 0).unwrap(), PartialResult::FuelExhausted { fuel: 0 });
        assert!(!defined_to_depth(&phi, &beta, 0, 1).unwrap());
    }

    #[test]
    fn undefined_position_faults_with_position() {
        let g = apply_fun(&Baire::zeros(), &Baire::zeros(), 3);
        assert_eq!(g.at(2), Err(EvalFault::FuelExhausted { position: nat(2), fuel: 3 }));
        assert!(!defined_to_depth(&Baire::zeros(), &Baire::zeros(), 3, 1).unwrap());
        assert!(defined_to_depth(&Baire::constant(1), &Baire::zeros(), 3, 10).unwrap());
    }
}
