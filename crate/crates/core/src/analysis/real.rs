use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use super::{pow2_neg, Rat};
use crate::compact::{CompactCode, CompactError};
use crate::k2::{Baire, EvalFault};

/// A regular rational stream: `|a(s) − a(t)| ≤ 2^{-s}` for `s < t`.
/// Values are memoised per stage.
#[derive(Clone)]
pub struct CauchyReal {
    label: String,
    approx: Arc<dyn Fn(u64) -> Rat + Send + Sync>,
    memo: Arc<Mutex<HashMap<u64, Rat>>>,
}

impl fmt::Debug for CauchyReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CauchyReal({})", self.label)
    }
}

/// A pair of stages breaking regularity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Irregularity {
    pub s: u64,
    pub t: u64,
}

impl CauchyReal {
    pub fn new(label: impl Into<String>, approx: impl Fn(u64) -> Rat + Send + Sync + 'static) -> Self {
        CauchyReal { label: label.into(), approx: Arc::new(approx), memo: Arc::default() }
    }

    pub fn from_rat(q: Rat) -> Self {
        let label = q.to_string();
        CauchyReal::new(label, move |_| q.clone())
    }

    /// `√q` truncated to `s + 2` binary places, for `q ≥ 0`.
    pub fn sqrt_of(q: Rat) -> Self {
        let label = format!("sqrt({q})");
        CauchyReal::new(label, move |s| truncated_sqrt(&q, s + 2))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn at(&self, s: u64) -> Rat {
        if let Some(v) = self.memo.lock().unwrap().get(&s) {
            return v.clone();
        }
        let v = (self.approx)(s);
        self.memo.lock().unwrap().entry(s).or_insert(v).clone()
    }

    pub fn neg(&self) -> Self {
        let a = self.clone();
        CauchyReal::new(format!("-({})", self.label), move |s| -a.at(s))
    }

    /// Stage `s` reads both summands at `s + 1`.
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        CauchyReal::new(format!("({})+({})", self.label, other.label), move |s| a.at(s + 1) + b.at(s + 1))
    }

    /// The first pair `s < t ≤ depth` with `|a(s) − a(t)| > 2^{-s}`.
    pub fn check_regular(&self, depth: u64) -> Option<Irregularity> {
        for t in 1..=depth {
            let at = self.at(t);
            for s in 0..t {
                if (self.at(s) - &at).abs() > pow2_neg(s) {
                    return Some(Irregularity { s, t });
                }
            }
        }
        None
    }
}

/// `⌊√⌊q·4^k⌋⌋ / 2^k`, below `√q` and within `2^{1−k}` of it.
pub(super) fn truncated_sqrt(q: &Rat, k: u64) -> Rat {
    if !q.is_positive() {
        return Rat::zero();
    }
    let scale = BigInt::one() << (2 * k);
    let n = (q * Rat::from_integer(scale)).floor().to_integer();
    Rat::new(n.sqrt(), BigInt::one() << k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Comparison {
    /// `a(s) − b(s) > 2^{1−s}`
    Gt { s: u64 },
    /// `b(s) − a(s) > 2^{1−s}`
    Lt { s: u64 },
    /// `|a(s) − b(s)| ≤ 2^{1−s}` for every `s ≤ fuel`.
    EqSoFar { fuel: u64 },
}

/// Scans `s = 0, …, fuel` for a strict-order witness in either direction.
pub fn compare(a: &CauchyReal, b: &CauchyReal, fuel: u64) -> Comparison {
    for s in 0..=fuel {
        let d = a.at(s) - b.at(s);
        let eps = pow2_neg(s) * Rat::from_integer(2.into());
        if d > eps {
            return Comparison::Gt { s };
        }
        if -d > eps {
            return Comparison::Lt { s };
        }
    }
    Comparison::EqSoFar { fuel }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum LpoOutcome {
    Found { n: u64 },
    AllZeroSoFar { fuel: u64 },
}

/// The least `n < fuel` with `ξ(n) ≠ 0`, if any.
pub fn lpo_probe(xi: &Baire, fuel: u64) -> Result<LpoOutcome, EvalFault> {
    for n in 0..fuel {
        if !xi.at(n)?.is_zero() {
            return Ok(LpoOutcome::Found { n });
        }
    }
    Ok(LpoOutcome::AllZeroSoFar { fuel })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DichotomyError {
    #[error("pair {index} refutes both a <= b (stage {le_refuted_at}) and a >= b (stage {ge_refuted_at})")]
    BothRefuted { index: usize, le_refuted_at: u64, ge_refuted_at: u64 },
    #[error(transparent)]
    Compact(#[from] CompactError),
}

/// First stage `s ≤ depth` refuting `a ≤ b`, i.e. with `a(s) − b(s) > 2^{1−s}`.
fn refutes_le(a: &CauchyReal, b: &CauchyReal, depth: u64) -> Option<u64> {
    (0..=depth).find(|&s| a.at(s) - b.at(s) > pow2_neg(s) * Rat::from_integer(2.into()))
}

/// Bits `y_i` with `y_i = 0 → a_i ≤ b_i` and `y_i ≠ 0 → a_i ≥ b_i`, each
/// unrefuted at stages `≤ depth`. The bits are the leftmost path of the
/// binary tree whose nodes satisfy every constraint so far, so a pair that
/// refutes neither side gets 0.
pub fn seq_dichotomy(pairs: &[(CauchyReal, CauchyReal)], depth: u64) -> Result<Vec<u8>, DichotomyError> {
    let mut allowed = Vec::with_capacity(pairs.len());
    for (index, (a, b)) in pairs.iter().enumerate() {
        let le = refutes_le(a, b, depth);
        let ge = refutes_le(b, a, depth);
        if let (Some(l), Some(g)) = (le, ge) {
            return Err(DichotomyError::BothRefuted { index, le_refuted_at: l, ge_refuted_at: g });
        }
        allowed.push([le.is_none(), ge.is_none()]);
    }
    let k = pairs.len() as u64;
    let bound = Baire::from_fn("dichotomy-bound", move |i| u64::from(i < k));
    let code = CompactCode::from_predicate("dichotomy", bound, move |s| {
        s.iter().enumerate().all(|(i, v)| match (allowed.get(i), v.to_usize()) {
            (Some(ok), Some(bit @ 0..=1)) => ok[bit],
            _ => false,
        })
    });
    let path = code.leftmost_path(k)?.ok_or(CompactError::Empty { index: 0, depth: k })?;
    Ok(path.iter().map(|v| u8::from(!v.is_zero())).collect())
}

/// The fixed enumeration of ℚ: for `h = 1, 2, …` and numerators `h−1` down to
/// `0` with denominator `h − num`, each fraction in lowest terms, then its
/// negative. Starts `0, 1, −1, 2, −2, 1/2, −1/2, 3, −3, 1/3, −1/3, …`.
pub fn rational_enumeration(count: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    let mut h: i64 = 1;
    while out.len() < count {
        for num in (0..h).rev() {
            let den = h - num;
            if num.gcd(&den) != 1 {
                continue;
            }
            out.push(Rat::new(num.into(), den.into()));
            if num > 0 {
                out.push(Rat::new((-num).into(), den.into()));
            }
        }
        h += 1;
    }
    out.truncate(count);
    out
}

pub const ENUMERATION_ID: &str = "zigzag";

/// A depth-`d` node of the tree of `x` with `R(a, x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DedekindPath {
    pub enumeration: String,
    pub source: String,
    pub depth: u64,
    /// `q_0, …, q_{d−1}`
    #[serde(serialize_with = "ser_rats")]
    pub rationals: Vec<Rat>,
    pub bits: Vec<u8>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl DedekindPath {
    /// The rationals placed below the real: bit 1.
    pub fn lower(&self) -> Vec<&Rat> {
        self.rationals.iter().zip(&self.bits).filter(|(_, b)| **b == 1).map(|(q, _)| q).collect()
    }

    pub fn upper(&self) -> Vec<&Rat> {
        self.rationals.iter().zip(&self.bits).filter(|(_, b)| **b == 0).map(|(q, _)| q).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DedekindError {
    #[error("{0} is forced both ways; the stream is not regular")]
    Contradiction(String),
}

/// `a(s) − 2^{1−s}` and `a(s) + 2^{1−s}` for `s ≤ n`.
struct StageBounds {
    lower: Vec<Rat>,
    upper: Vec<Rat>,
}

impl StageBounds {
    fn new(a: &CauchyReal, n: u64) -> Self {
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for s in 0..=n {
            let eps = pow2_neg(s) * Rat::from_integer(2.into());
            let v = a.at(s);
            lower.push(v.clone() - &eps);
            upper.push(v + eps);
        }
        StageBounds { lower, upper }
    }

    /// `q < a(s) − 2^{1−s}` for some `s ≤ n`.
    fn forced_one(&self, q: &Rat) -> bool {
        self.lower.iter().any(|l| q < l)
    }

    /// `q > a(s) + 2^{1−s}` for some `s ≤ n`.
    fn forced_zero(&self, q: &Rat) -> bool {
        self.upper.iter().any(|u| q > u)
    }
}

/// `R(a, x)`: every `x(i)` is a bit, is 1 when some `s ≤ |x|` has
/// `q_i < a(s) − 2^{1−s}`, and is 0 when some `s ≤ |x|` has `q_i > a(s) + 2^{1−s}`.
pub fn r_holds(a: &CauchyReal, x: &[u8], qs: &[Rat]) -> bool {
    let stages = StageBounds::new(a, x.len() as u64);
    x.iter().enumerate().all(|(i, &b)| {
        let q = &qs[i];
        b <= 1 && (!stages.forced_one(q) || b == 1) && (!stages.forced_zero(q) || b == 0)
    })
}

/// The tree `{x : R(a, x)}` as a binary compact code.
pub fn r_tree(a: &CauchyReal, depth: u64) -> CompactCode {
    let qs = rational_enumeration(depth as usize);
    let a = a.clone();
    CompactCode::from_predicate("dedekind", Baire::ones(), move |s| {
        if s.len() > qs.len() {
            return false;
        }
        let Some(x) = s.iter().map(|v| v.to_u8().filter(|&b| b <= 1)).collect::<Option<Vec<u8>>>() else {
            return false;
        };
        r_holds(&a, &x, &qs)
    })
}

/// The leftmost depth-`depth` node of the `R(a, ·)` tree. A node of length `d`
/// is admissible exactly when each bit meets its own forcing conditions at
/// stages `≤ d`, and those conditions only grow with `d`, so the leftmost node
/// takes each bit as small as its stage-`d` constraints allow.
pub fn cauchy_to_dedekind(a: &CauchyReal, depth: u64) -> Result<DedekindPath, DedekindError> {
    let qs = rational_enumeration(depth as usize);
    let stages = StageBounds::new(a, depth);
    let mut bits = Vec::with_capacity(qs.len());
    for q in &qs {
        let one = stages.forced_one(q);
        if one && stages.forced_zero(q) {
            return Err(DedekindError::Contradiction(q.to_string()));
        }
        bits.push(u8::from(one));
    }
    Ok(DedekindPath {
        enumeration: ENUMERATION_ID.into(),
        source: a.label().to_string(),
        depth,
        rationals: qs,
        bits,
    })
}

/// Checks the equivalence clause on the path's prefix, read through its
/// contrapositive: no stage `s ≤ depth` has `a(s) + 2^{1−s} < p` for a `p`
/// with bit 1, or `q < a(s) − 2^{1−s}` for a `q` with bit 0. Returns the
/// offending rational.
pub fn cut_brackets(a: &CauchyReal, path: &DedekindPath) -> Option<Rat> {
    let stages = StageBounds::new(a, path.depth);
    path.rationals
        .iter()
        .zip(&path.bits)
        .find(|(q, &b)| if b == 1 { stages.forced_zero(q) } else { stages.forced_one(q) })
        .map(|(q, _)| q.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::rat;
    use crate::nat::{nat, Nat};

    fn sparse(first: u64) -> Baire {
        Baire::new("sparse", move |n| Ok(if *n == nat(first) { nat(1) } else { Nat::zero() }))
    }

    fn c(n: i64, d: i64) -> CauchyReal {
        CauchyReal::from_rat(rat(n, d))
    }

    /// `a(s) = 2^{-s}`, a representative of 0.
    fn vanishing() -> CauchyReal {
        CauchyReal::new("2^-s", pow2_neg)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&c(0, 1), &c(1, 1), 50), Comparison::Lt { s: 2 });
        assert_eq!(compare(&c(1, 1), &c(0, 1), 50), Comparison::Gt { s: 2 });
        assert_eq!(compare(&c(0, 1), &c(0, 1), 17), Comparison::EqSoFar { fuel: 17 });
        assert_eq!(compare(&vanishing(), &c(0, 1), 200), Comparison::EqSoFar { fuel: 200 });
    }

    #[test]
    fn lpo_probe_is_bounded() {
        assert_eq!(lpo_probe(&Baire::zeros(), 100).unwrap(), LpoOutcome::AllZeroSoFar { fuel: 100 });
        assert_eq!(lpo_probe(&sparse(7), 100).unwrap(), LpoOutcome::Found { n: 7 });
        assert_eq!(lpo_probe(&sparse(7), 5).unwrap(), LpoOutcome::AllZeroSoFar { fuel: 5 });
    }

    #[test]
    fn dichotomy_examples() {
        let pairs = vec![(c(0, 1), c(1, 1)), (c(1, 1), c(0, 1)), (c(0, 1), c(0, 1))];
        assert_eq!(seq_dichotomy(&pairs, 64).unwrap(), vec![0, 1, 0]);
        let same = vec![(c(3, 7), c(3, 7)); 5];
        assert_eq!(seq_dichotomy(&same, 64).unwrap(), vec![0; 5]);
        assert_eq!(seq_dichotomy(&[(vanishing(), c(0, 1))], 64).unwrap(), vec![0]);
    }

    #[test]
    fn dichotomy_reports_broken_streams() {
        let wild = CauchyReal::new("wild", |s| if s % 2 == 0 { rat(100, 1) } else { rat(-100, 1) });
        let err = seq_dichotomy(&[(c(0, 1), c(0, 1)), (wild, c(0, 1))], 8).unwrap_err();
        assert!(matches!(err, DichotomyError::BothRefuted { index: 1, .. }));
    }

    #[test]
    fn enumeration_prefix() {
        let want = [rat(0, 1), rat(1, 1), rat(-1, 1), rat(2, 1), rat(-2, 1), rat(1, 2), rat(-1, 2), rat(3, 1)];
        assert_eq!(rational_enumeration(8), want);
        let many = rational_enumeration(2000);
        let distinct: std::collections::BTreeSet<_> = many.iter().collect();
        assert_eq!(distinct.len(), many.len());
    }

    #[test]
    fn half_cut() {
        let p = cauchy_to_dedekind(&c(1, 2), 64).unwrap();
        let bit = |q: Rat| p.bits[p.rationals.iter().position(|r| *r == q).unwrap()];
        assert_eq!(bit(rat(0, 1)), 1);
        assert_eq!(bit(rat(1, 1)), 0);
        assert_eq!(bit(rat(1, 2)), 0);
        assert!(p.lower().iter().all(|q| **q < rat(1, 2)));
        assert!(p.upper().iter().all(|q| **q >= rat(1, 2)));
        assert!(r_holds(&c(1, 2), &p.bits, &p.rationals));
        assert_eq!(cut_brackets(&c(1, 2), &p), None);
    }

    #[test]
    fn closed_form_is_the_leftmost_node() {
        for a in [c(1, 2), c(-5, 3), CauchyReal::sqrt_of(rat(2, 1)), vanishing()] {
            for d in [1, 4, 9, 12] {
                let tree = r_tree(&a, d).leftmost_path(d).unwrap().unwrap();
                let got = cauchy_to_dedekind(&a, d).unwrap().bits;
                let tree: Vec<u8> = tree.iter().map(|v| v.to_u8().unwrap()).collect();
                assert_eq!(got, tree, "{a:?} at depth {d}");
            }
        }
    }

    #[test]
    fn sqrt_streams_are_regular() {
        let r = CauchyReal::sqrt_of(rat(2, 1));
        assert_eq!(r.check_regular(40), None);
        let s = r.at(30);
        assert!(s.clone() * s.clone() <= rat(2, 1));
        let hi = s + pow2_neg(31);
        assert!(hi.clone() * hi > rat(2, 1));
        assert!(CauchyReal::new("bad", |s| rat(s as i64 % 2, 1)).check_regular(4).is_some());
    }
}
