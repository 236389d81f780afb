use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::{apply_fun, Baire, EvalFault, Shape};
use crate::nat::{self, Nat};

type MapEval = dyn Fn(&Baire, &Nat) -> Result<Nat, EvalFault> + Send + Sync;
type Modulus = dyn Fn(&Nat) -> u64 + Send + Sync;

/// A continuous map on Baire space, given by how each output position is
/// computed from the input. With a static modulus, position `n` must read only
/// input positions below `modulus(n)`; without one, the reads are traced.
#[derive(Clone)]
pub struct ContinuousMap {
    label: String,
    eval: Arc<MapEval>,
    modulus: Option<Arc<Modulus>>,
    constant: Option<Baire>,
}

impl fmt::Debug for ContinuousMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContinuousMap({})", self.label)
    }
}

impl ContinuousMap {
    pub fn traced(
        label: impl Into<String>,
        eval: impl Fn(&Baire, &Nat) -> Result<Nat, EvalFault> + Send + Sync + 'static,
    ) -> Self {
        ContinuousMap { label: label.into(), eval: Arc::new(eval), modulus: None, constant: None }
    }

    pub fn with_modulus(
        label: impl Into<String>,
        modulus: impl Fn(&Nat) -> u64 + Send + Sync + 'static,
        eval: impl Fn(&Baire, &Nat) -> Result<Nat, EvalFault> + Send + Sync + 'static,
    ) -> Self {
        ContinuousMap {
            label: label.into(),
            eval: Arc::new(eval),
            modulus: Some(Arc::new(modulus)),
            constant: None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn modulus(&self, n: &Nat) -> Option<u64> {
        self.modulus.as_ref().map(|m| m(n))
    }

    /// `F(ξ)(n)`
    pub fn value(&self, xi: &Baire, n: &Nat) -> Result<Nat, EvalFault> {
        (self.eval)(xi, n)
    }

    /// `F(ξ)` computed directly.
    pub fn apply(&self, xi: &Baire) -> Baire {
        let (f, x) = (self.clone(), xi.clone());
        Baire::new(format!("{}({})", self.label, xi.label()), move |n| f.value(&x, n))
    }

    pub fn identity() -> Self {
        Self::with_modulus("identity", small_plus(1), |xi: &Baire, n: &Nat| xi.get(n))
    }

    pub fn constant(c: Baire) -> Self {
        let label = format!("const({})", c.label());
        let value = c.clone();
        let mut map = Self::with_modulus(label, |_| 0, move |_: &Baire, n: &Nat| c.get(n));
        map.constant = Some(value);
        map
    }

    /// `⟨α, β⟩ ↦ ⟨β, α⟩`
    pub fn swap_pair() -> Self {
        Self::with_modulus("swap", small_plus(2), |xi: &Baire, n: &Nat| {
            let m: Nat = n ^ Nat::from(1u32);
            xi.get(&m)
        })
    }

    /// `ξ ↦ λn.f(ξ(n))`
    pub fn pointwise(label: impl Into<String>, f: impl Fn(&Nat) -> Nat + Send + Sync + 'static) -> Self {
        Self::with_modulus(label, small_plus(1), move |xi: &Baire, n: &Nat| Ok(f(&xi.get(n)?)))
    }

    /// `ξ ↦ fst ξ`
    pub fn fst() -> Self {
        Self::with_modulus(
            "fst",
            |n| n.to_u64().map_or(u64::MAX, |k| 2 * k + 1),
            |xi: &Baire, n: &Nat| xi.get(&(n << 1u32)),
        )
    }

    /// `ξ ↦ β|ξ`
    pub fn application(beta: &Baire, fuel: u64) -> Self {
        let b = beta.clone();
        Self::traced(format!("{}|·", beta.label()), move |xi: &Baire, n: &Nat| {
            apply_fun(&b, xi, fuel).get(n)
        })
    }

    /// `ξ ↦ G(F(ξ))`
    pub fn then(&self, g: &ContinuousMap) -> Self {
        let (f, g2) = (self.clone(), g.clone());
        Self::traced(format!("{}∘{}", g.label, self.label), move |xi: &Baire, n: &Nat| {
            g2.value(&f.apply(xi), n)
        })
    }
}

fn small_plus(k: u64) -> impl Fn(&Nat) -> u64 + Send + Sync {
    move |n: &Nat| n.to_u64().map_or(u64::MAX, |v| v.saturating_add(k))
}

/// `c` when `alpha` is the associate of the constant map with value `c`.
pub(crate) fn constant_map_value(alpha: &Baire) -> Option<&Baire> {
    match alpha.shape() {
        Shape::ConstantMap(c) => Some(c),
        _ => None,
    }
}

/// `Λξ.F(ξ)`: the canonical associate. On `⟨n⟩⌢s` it answers `0` while `s` is
/// too short to determine `F(ξ)(n)` and `1 + F(ξ)(n)` once it is.
///
/// A map with a static modulus is run on exactly the first `modulus(n)` values;
/// reading further is reported as [`EvalFault::ModulusViolation`]. A traced map
/// is run on the whole of `s`, and a read past its end means "not yet".
/// Undefinedness inside `F` (fuel exhaustion) also answers `0`.
pub fn associate_of(f: &ContinuousMap) -> Baire {
    let f = f.clone();
    let shape = f.constant.clone().map_or(Shape::Plain, Shape::ConstantMap);
    Baire::shaped(format!("Λ.{}", f.label), shape, move |code| {
        let Some(seq) = nat::decode(code) else { return Ok(Nat::from(0u32)) };
        let Some((n, rest)) = seq.split_first() else { return Ok(Nat::from(0u32)) };
        let modulus = f.modulus(n);
        let window = match modulus {
            Some(m) if (rest.len() as u64) < m => return Ok(Nat::from(0u32)),
            Some(m) => rest[..m as usize].to_vec(),
            None => rest.to_vec(),
        };
        let (probe, id) = Baire::probe(window);
        match f.value(&probe, n) {
            Ok(v) => Ok(v + 1u32),
            Err(EvalFault::OutOfPrefix { probe, index }) if probe == id => match modulus {
                Some(m) => Err(EvalFault::ModulusViolation { read: index, modulus: m }),
                None => Ok(Nat::from(0u32)),
            },
            Err(EvalFault::FuelExhausted { .. }) => Ok(Nat::from(0u32)),
            Err(e) => Err(e),
        }
    })
}
