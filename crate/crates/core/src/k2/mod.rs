//! Kleene's second algebra: elements of Baire space as memoized oracles,
//! fuel-bounded partial application, the pairing and sequence encodings, and
//! associates of continuous maps.

mod apply;
mod assoc;

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::nat::{self, nat, Nat};

pub use apply::{apply_fun, apply_num, defined_to_depth, use_trace, PartialResult, TraceError};
pub use assoc::{associate_of, ContinuousMap};
pub(crate) use assoc::constant_map_value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalFault {
    #[error("application undefined within fuel {fuel} at position {position}")]
    FuelExhausted { position: Nat, fuel: u64 },
    /// A finite probe was read past its end.
    #[error("read past the end of a finite prefix (probe {probe}, index {index})")]
    OutOfPrefix { probe: u64, index: Nat },
    #[error("continuous map read position {read} of its input, beyond its declared modulus {modulus}")]
    ModulusViolation { read: Nat, modulus: u64 },
    #[error("number too large: {0}")]
    Overflow(String),
    #[error("{0}")]
    Other(String),
}

type Oracle = dyn Fn(&Nat) -> Result<Nat, EvalFault> + Send + Sync;

/// Completes an admissible prefix of a compact-set code to a member, or `None`
/// when the prefix has no extension in the set.
pub type Completion = dyn Fn(&[Nat]) -> Result<Option<Baire>, EvalFault> + Send + Sync;

/// How an element was built. Projections and applications use this to return
/// the underlying element instead of reindexing; the values are the same.
#[derive(Clone)]
pub(crate) enum Shape {
    Plain,
    Pair(Baire, Baire),
    Cons(Baire),
    Packed(Arc<Family>),
    /// The associate of a constant map.
    ConstantMap(Baire),
    Members(Arc<Completion>),
}

pub(crate) struct Family {
    make: Box<dyn Fn(u64) -> Baire + Send + Sync>,
    cache: Mutex<HashMap<u64, Baire>>,
}

impl Family {
    fn get(&self, m: u64) -> Baire {
        if let Some(e) = self.cache.lock().unwrap().get(&m) {
            return e.clone();
        }
        let e = (self.make)(m);
        self.cache.lock().unwrap().entry(m).or_insert(e).clone()
    }
}

struct Inner {
    label: String,
    oracle: Box<Oracle>,
    memo: Mutex<HashMap<Nat, Result<Nat, EvalFault>>>,
    shape: Shape,
}

/// A total function ℕ → ℕ given by an oracle, with a memo table.
#[derive(Clone)]
pub struct Baire(Arc<Inner>);

impl fmt::Debug for Baire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Baire({})", self.0.label)
    }
}

static PROBE_IDS: AtomicU64 = AtomicU64::new(1);

impl Baire {
    pub fn new(
        label: impl Into<String>,
        oracle: impl Fn(&Nat) -> Result<Nat, EvalFault> + Send + Sync + 'static,
    ) -> Self {
        Self::shaped(label, Shape::Plain, oracle)
    }

    pub(crate) fn shaped(
        label: impl Into<String>,
        shape: Shape,
        oracle: impl Fn(&Nat) -> Result<Nat, EvalFault> + Send + Sync + 'static,
    ) -> Self {
        Baire(Arc::new(Inner {
            label: label.into(),
            oracle: Box::new(oracle),
            memo: Mutex::new(HashMap::new()),
            shape,
        }))
    }

    pub(crate) fn shape(&self) -> &Shape {
        &self.0.shape
    }

    /// The same values, carrying a completion of admissible prefixes to members.
    pub fn with_completion(&self, completion: Arc<Completion>) -> Self {
        let a = self.clone();
        Self::shaped(self.label().to_string(), Shape::Members(completion), move |n| a.get(n))
    }

    pub fn completion(&self) -> Option<Arc<Completion>> {
        match &self.0.shape {
            Shape::Members(c) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    /// The value at `n`. The memo lock is not held while the oracle runs, so
    /// oracles may evaluate other elements (or this one) recursively.
    pub fn get(&self, n: &Nat) -> Result<Nat, EvalFault> {
        if let Some(v) = self.0.memo.lock().unwrap().get(n) {
            return v.clone();
        }
        let v = (self.0.oracle)(n);
        self.0.memo.lock().unwrap().entry(n.clone()).or_insert(v).clone()
    }

    pub fn at(&self, n: u64) -> Result<Nat, EvalFault> {
        self.get(&nat(n))
    }

    /// `(α(0), …, α(n−1))`
    pub fn prefix(&self, n: u64) -> Result<Vec<Nat>, EvalFault> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// The code of `ᾱn`.
    pub fn prefix_code(&self, n: u64) -> Result<Nat, EvalFault> {
        Ok(nat::encode(&self.prefix(n)?))
    }

    pub fn constant(c: u64) -> Self {
        let v = nat(c);
        Baire::new(format!("const:{c}"), move |_| Ok(v.clone()))
    }

    pub fn zeros() -> Self {
        Baire::new("zeros", |_| Ok(Nat::zero()))
    }

    pub fn ones() -> Self {
        Baire::new("ones", |_| Ok(nat(1)))
    }

    /// `λn.n`
    pub fn identity() -> Self {
        Baire::new("identity", |n| Ok(n.clone()))
    }

    /// Finite table, `default` beyond it.
    pub fn table(values: &[u64], default: u64) -> Self {
        let vals: Vec<Nat> = values.iter().map(|&v| nat(v)).collect();
        let d = nat(default);
        let label = format!("table:{values:?}/{default}");
        Baire::new(label, move |n| {
            Ok(n.to_usize().and_then(|i| vals.get(i).cloned()).unwrap_or_else(|| d.clone()))
        })
    }

    /// The element answering `0` on the empty sequence and `k + 1` on every
    /// sequence starting with `k`, so that `α(β) = β(0)`.
    pub fn head() -> Self {
        Baire::new("head", |code| {
            let s = nat::decode(code).unwrap_or_default();
            Ok(s.first().map_or_else(Nat::zero, |k| k + 1u32))
        })
    }

    /// Built-in elements by name: `zeros`, `ones`, `identity`, `head`, `const:N`.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "zeros" => Some(Baire::zeros()),
            "ones" => Some(Baire::ones()),
            "identity" => Some(Baire::identity()),
            "head" => Some(Baire::head()),
            _ => name.strip_prefix("const:")?.parse().ok().map(Baire::constant),
        }
    }

    /// A finite sequence that faults when read past its end. Returns the probe id
    /// carried by those faults.
    pub fn probe(values: Vec<Nat>) -> (Self, u64) {
        let id = PROBE_IDS.fetch_add(1, Ordering::Relaxed);
        let len = values.len();
        let b = Baire::new(format!("probe:{id}"), move |n| match n.to_usize() {
            Some(i) if i < len => Ok(values[i].clone()),
            _ => Err(EvalFault::OutOfPrefix { probe: id, index: n.clone() }),
        });
        (b, id)
    }

    /// The finite sequence extended by zeros.
    pub fn extend_by_zeros(values: Vec<Nat>) -> Self {
        Baire::new("prefix+zeros", move |n| {
            Ok(n.to_usize().and_then(|i| values.get(i).cloned()).unwrap_or_default())
        })
    }

    pub fn from_fn(label: impl Into<String>, f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Baire::new(label, move |n| {
            let i = n.to_u64().ok_or_else(|| EvalFault::Overflow("position".into()))?;
            Ok(nat(f(i)))
        })
    }

    /// `λn.α(f(n))` for an index map `f`.
    pub fn reindex(&self, label: impl Into<String>, f: impl Fn(&Nat) -> Nat + Send + Sync + 'static) -> Self {
        let a = self.clone();
        Baire::new(label, move |n| a.get(&f(n)))
    }

    /// The first position `< depth` where the two elements differ.
    pub fn first_difference(&self, other: &Baire, depth: u64) -> Result<Option<u64>, EvalFault> {
        for i in 0..depth {
            if self.at(i)? != other.at(i)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn agrees_to(&self, other: &Baire, depth: u64) -> Result<bool, EvalFault> {
        Ok(self.first_difference(other, depth)?.is_none())
    }
}

/// `⟨n⟩⌢α`
pub fn cons(n: Nat, alpha: &Baire) -> Baire {
    let a = alpha.clone();
    let head = n.clone();
    Baire::shaped(format!("cons({n},{})", alpha.label()), Shape::Cons(alpha.clone()), move |i| {
        if i.is_zero() {
            Ok(head.clone())
        } else {
            a.get(&(i - 1u32))
        }
    })
}

/// `shift α = λn.α(n+1)`
pub fn tail(alpha: &Baire) -> Baire {
    if let Shape::Cons(rest) = alpha.shape() {
        return rest.clone();
    }
    alpha.reindex(format!("tail({})", alpha.label()), |n| n + 1u32)
}

/// `⟨α, β⟩`: even positions from `α`, odd positions from `β`.
pub fn pair_fun(alpha: &Baire, beta: &Baire) -> Baire {
    let (a, b) = (alpha.clone(), beta.clone());
    let shape = Shape::Pair(alpha.clone(), beta.clone());
    Baire::shaped(format!("<{},{}>", alpha.label(), beta.label()), shape, move |n| {
        let half = n >> 1u32;
        if n.bit(0) {
            b.get(&half)
        } else {
            a.get(&half)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Fst,
    Snd,
}

/// `fst γ = λn.γ(2n)` and `snd γ = λn.γ(2n+1)`.
pub fn proj(gamma: &Baire, side: Side) -> Baire {
    if let Shape::Pair(a, b) = gamma.shape() {
        return match side {
            Side::Fst => a.clone(),
            Side::Snd => b.clone(),
        };
    }
    match side {
        Side::Fst => gamma.reindex(format!("fst({})", gamma.label()), |n| n << 1u32),
        Side::Snd => gamma.reindex(format!("snd({})", gamma.label()), |n| (n << 1u32) + 1u32),
    }
}

/// `α_m = λn.α(2^m(2n+1) − 1)`
pub fn component(alpha: &Baire, m: u64) -> Baire {
    if let Shape::Packed(family) = alpha.shape() {
        return family.get(m);
    }
    alpha.reindex(format!("{}_{m}", alpha.label()), move |n| nat::pair(m, n))
}

/// The unique `α` with `α_m = F(m)` for all `m`. Members of the family are
/// built once and cached.
pub fn pack_seq(label: impl Into<String>, family: impl Fn(u64) -> Baire + Send + Sync + 'static) -> Baire {
    let fam = Arc::new(Family { make: Box::new(family), cache: Mutex::new(HashMap::new()) });
    let f2 = fam.clone();
    Baire::shaped(label, Shape::Packed(fam), move |p| {
        let (m, n) = nat::unpair(p);
        f2.get(m).get(&n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_interleaves() {
        let p = pair_fun(&Baire::identity(), &Baire::zeros());
        assert_eq!(p.at(4).unwrap(), nat(2));
        assert_eq!(p.at(5).unwrap(), nat(0));
        let a = Baire::table(&[3, 1, 4, 1, 5], 9);
        let q = pair_fun(&a, &Baire::ones());
        assert!(proj(&q, Side::Fst).agrees_to(&a, 100).unwrap());
        assert!(proj(&q, Side::Snd).agrees_to(&Baire::ones(), 100).unwrap());
    }

    #[test]
    fn components_of_identity() {
        let id = Baire::identity();
        let c0 = component(&id, 0);
        let c1 = component(&id, 1);
        for n in 0..30 {
            assert_eq!(c0.at(n).unwrap(), nat(2 * n));
            assert_eq!(c1.at(n).unwrap(), nat(4 * n + 1));
        }
    }

    #[test]
    fn pack_and_component_roundtrip() {
        let packed = pack_seq("family", |m| Baire::table(&[m, m + 1, 2 * m], m));
        for m in 0..6 {
            let want = Baire::table(&[m, m + 1, 2 * m], m);
            assert!(component(&packed, m).agrees_to(&want, 64).unwrap());
        }
        let a = Baire::from_fn("sq", |n| n * n % 17);
        let a2 = a.clone();
        let repacked = pack_seq("repack", move |m| component(&a2, m));
        assert!(repacked.agrees_to(&a, 64).unwrap());
    }

    #[test]
    fn cons_and_tail() {
        let a = Baire::table(&[7, 8, 9], 1);
        let c = cons(nat(3), &a);
        assert_eq!(c.at(0).unwrap(), nat(3));
        assert!(tail(&c).agrees_to(&a, 50).unwrap());
        let eta = cons(a.at(0).unwrap(), &tail(&a));
        assert!(eta.agrees_to(&a, 50).unwrap());
    }

    #[test]
    fn probes_fault_past_their_end() {
        let (p, id) = Baire::probe(vec![nat(1), nat(2)]);
        assert_eq!(p.at(1).unwrap(), nat(2));
        assert_eq!(p.at(2), Err(EvalFault::OutOfPrefix { probe: id, index: nat(2) }));
    }

    #[test]
    fn named_elements() {
        assert_eq!(Baire::named("const:6").unwrap().at(10).unwrap(), nat(6));
        assert!(Baire::named("nope").is_none());
        let h = Baire::head();
        assert_eq!(h.get(&nat::encode_u64(&[])).unwrap(), nat(0));
        assert_eq!(h.get(&nat::encode_u64(&[4, 2])).unwrap(), nat(5));
    }
}
