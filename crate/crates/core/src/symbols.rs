//! The table of primitive-recursive function symbols usable in `(app ...)` terms.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::nat::{self, Nat, MAX_BITS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("`{0}` would produce a number wider than the evaluation limit")]
    Overflow(&'static str),
}

pub type Evaluator = fn(&[Nat]) -> Result<Nat, SymbolError>;

pub struct SymbolEntry {
    pub name: &'static str,
    pub arity: usize,
    pub eval: Evaluator,
}

/// Index into [`SymbolTable::standard`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymId(u16);

impl SymId {
    pub fn entry(self) -> &'static SymbolEntry {
        &SymbolTable::standard().entries[self.0 as usize]
    }

    pub fn name(self) -> &'static str {
        self.entry().name
    }

    pub fn arity(self) -> usize {
        self.entry().arity
    }

    pub fn eval(self, args: &[Nat]) -> Result<Nat, SymbolError> {
        debug_assert_eq!(args.len(), self.arity());
        (self.entry().eval)(args)
    }

    /// Looks a symbol up by name in the standard table.
    pub fn named(name: &str) -> Option<SymId> {
        SymbolTable::standard().lookup(name)
    }

    /// Like [`SymId::named`] but for names known to be built in.
    pub(crate) fn builtin(name: &str) -> SymId {
        Self::named(name).unwrap_or_else(|| panic!("`{name}` is not a built-in symbol"))
    }
}

impl fmt::Debug for SymId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub struct SymbolTable {
    entries: Vec<SymbolEntry>,
}

impl SymbolTable {
    pub fn standard() -> &'static SymbolTable {
        static TABLE: OnceLock<SymbolTable> = OnceLock::new();
        TABLE.get_or_init(|| SymbolTable { entries: standard_entries() })
    }

    pub fn lookup(&self, name: &str) -> Option<SymId> {
        self.entries.iter().position(|e| e.name == name).map(|i| SymId(i as u16))
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymId, &SymbolEntry)> {
        self.entries.iter().enumerate().map(|(i, e)| (SymId(i as u16), e))
    }
}

fn b(x: bool) -> Nat {
    if x {
        Nat::one()
    } else {
        Nat::zero()
    }
}

fn guard(name: &'static str, bits: u64) -> Result<(), SymbolError> {
    if bits > MAX_BITS {
        Err(SymbolError::Overflow(name))
    } else {
        Ok(())
    }
}

fn small(name: &'static str, n: &Nat) -> Result<u64, SymbolError> {
    n.to_u64().filter(|&v| v <= MAX_BITS).ok_or(SymbolError::Overflow(name))
}

/// Rationals are coded as `cantor(sign, cantor(numerator, denominator - 1))`
/// with a nonzero sign component meaning negative.
pub fn encode_rat(q: &BigRational) -> Nat {
    let sign = if q.is_negative() { Nat::one() } else { Nat::zero() };
    let num = q.numer().abs().to_biguint().unwrap_or_default();
    let den = q.denom().to_biguint().unwrap_or_else(Nat::one) - 1u32;
    nat::cantor_pair(&sign, &nat::cantor_pair(&num, &den))
}

/// Total: every natural number denotes some rational.
pub fn decode_rat(code: &Nat) -> BigRational {
    let (sign, rest) = nat::cantor_unpair(code);
    let (num, den) = nat::cantor_unpair(&rest);
    let sign = if sign.is_zero() { Sign::Plus } else { Sign::Minus };
    let num = BigInt::from_biguint(sign, num);
    let den = BigInt::from_biguint(Sign::Plus, den + 1u32);
    BigRational::new(num, den)
}

fn q1(code: &Nat) -> BigRational {
    decode_rat(code)
}

fn pow2_neg(k: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

fn standard_entries() -> Vec<SymbolEntry> {
    macro_rules! sym {
        ($name:expr, $arity:expr, $f:expr) => {
            SymbolEntry { name: $name, arity: $arity, eval: $f }
        };
    }
    vec![
        sym!("add", 2, |a| Ok(&a[0] + &a[1])),
        sym!("mul", 2, |a| {
            guard("mul", a[0].bits() + a[1].bits())?;
            Ok(&a[0] * &a[1])
        }),
        sym!("sub", 2, |a| Ok(if a[0] > a[1] { &a[0] - &a[1] } else { Nat::zero() })),
        sym!("pred", 1, |a| Ok(if a[0].is_zero() { Nat::zero() } else { &a[0] - 1u32 })),
        sym!("pow", 2, |a| {
            let e = small("pow", &a[1])?;
            guard("pow", a[0].bits().saturating_mul(e))?;
            Ok(num_traits::pow::pow(a[0].clone(), e as usize))
        }),
        sym!("pow2", 1, |a| {
            let e = small("pow2", &a[0])?;
            Ok(Nat::one() << e)
        }),
        sym!("div", 2, |a| Ok(if a[1].is_zero() { Nat::zero() } else { &a[0] / &a[1] })),
        sym!("mod", 2, |a| Ok(if a[1].is_zero() { a[0].clone() } else { &a[0] % &a[1] })),
        sym!("min", 2, |a| Ok(a[0].clone().min(a[1].clone()))),
        sym!("max", 2, |a| Ok(a[0].clone().max(a[1].clone()))),
        sym!("sg", 1, |a| Ok(b(!a[0].is_zero()))),
        sym!("nsg", 1, |a| Ok(b(a[0].is_zero()))),
        sym!("eqb", 2, |a| Ok(b(a[0] == a[1]))),
        sym!("le", 2, |a| Ok(b(a[0] <= a[1]))),
        sym!("lt", 2, |a| Ok(b(a[0] < a[1]))),
        // cond(c, a, b) = a if c = 0, else b
        sym!("cond", 3, |a| Ok(if a[0].is_zero() { a[1].clone() } else { a[2].clone() })),
        sym!("pair", 2, |a| {
            let m = small("pair", &a[0])?;
            Ok(nat::pair(m, &a[1]))
        }),
        sym!("unpair-l", 1, |a| Ok(nat::nat(nat::unpair(&a[0]).0))),
        sym!("unpair-r", 1, |a| Ok(nat::unpair(&a[0]).1)),
        sym!("cpair", 2, |a| Ok(nat::cantor_pair(&a[0], &a[1]))),
        sym!("cunpair-l", 1, |a| Ok(nat::cantor_unpair(&a[0]).0)),
        sym!("cunpair-r", 1, |a| Ok(nat::cantor_unpair(&a[0]).1)),
        sym!("snoc", 2, |a| {
            guard("snoc", a[0].bits() + 2 * a[1].bits() + 2)?;
            Ok(nat::snoc(&a[0], &a[1]))
        }),
        sym!("len", 1, |a| Ok(nat::nat(nat::decode(&a[0]).map_or(0, |s| s.len() as u64)))),
        sym!("at", 2, |a| {
            let s = nat::decode(&a[0]).unwrap_or_default();
            Ok(a[1].to_usize().and_then(|i| s.get(i).cloned()).unwrap_or_default())
        }),
        sym!("take", 2, |a| {
            let s = nat::decode(&a[0]).unwrap_or_default();
            let n = a[1].to_usize().unwrap_or(usize::MAX).min(s.len());
            Ok(nat::encode(&s[..n]))
        }),
        sym!("cat", 2, |a| {
            let mut s = nat::decode(&a[0]).unwrap_or_default();
            s.extend(nat::decode(&a[1]).unwrap_or_default());
            Ok(nat::encode(&s))
        }),
        sym!("qnat", 1, |a| Ok(encode_rat(&BigRational::from_integer(BigInt::from(a[0].clone()))))),
        sym!("qadd", 2, |a| Ok(encode_rat(&(q1(&a[0]) + q1(&a[1]))))),
        sym!("qsub", 2, |a| Ok(encode_rat(&(q1(&a[0]) - q1(&a[1]))))),
        sym!("qmul", 2, |a| Ok(encode_rat(&(q1(&a[0]) * q1(&a[1]))))),
        sym!("qneg", 1, |a| Ok(encode_rat(&-q1(&a[0])))),
        sym!("qabs", 1, |a| Ok(encode_rat(&q1(&a[0]).abs()))),
        sym!("qle", 2, |a| Ok(b(q1(&a[0]) <= q1(&a[1])))),
        sym!("qlt", 2, |a| Ok(b(q1(&a[0]) < q1(&a[1])))),
        // 2^{-k}
        sym!("qpow2neg", 1, |a| Ok(encode_rat(&pow2_neg(small("qpow2neg", &a[0])?)))),
        // 2^{1-s}
        sym!("qtol", 1, |a| {
            let s = small("qtol", &a[0])?;
            Ok(encode_rat(&(pow2_neg(s) * BigRational::from_integer(BigInt::from(2)))))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::nat;

    fn ev(name: &str, args: &[u64]) -> Nat {
        let args: Vec<Nat> = args.iter().map(|&x| nat(x)).collect();
        SymId::named(name).unwrap().eval(&args).unwrap()
    }

    #[test]
    fn arithmetic() {
        assert_eq!(ev("add", &[2, 3]), nat(5));
        assert_eq!(ev("sub", &[2, 3]), nat(0));
        assert_eq!(ev("sub", &[7, 3]), nat(4));
        assert_eq!(ev("pow2", &[5]), nat(32));
        assert_eq!(ev("cond", &[0, 4, 9]), nat(4));
        assert_eq!(ev("cond", &[2, 4, 9]), nat(9));
    }

    #[test]
    fn names_are_unique() {
        let t = SymbolTable::standard();
        let mut names: Vec<_> = t.iter().map(|(_, e)| e.name).collect();
        let before = names.len();
        names.sort();
        names.dedup();
        assert_eq!(before, names.len());
    }

    #[test]
    fn sequence_symbols_agree_with_coding() {
        let c = nat::encode_u64(&[4, 0, 2]);
        assert_eq!(ev("snoc", &[0, 4]), nat::encode_u64(&[4]));
        let c_u = c.to_u64().unwrap();
        assert_eq!(ev("len", &[c_u]), nat(3));
        assert_eq!(ev("at", &[c_u, 2]), nat(2));
        assert_eq!(ev("take", &[c_u, 1]), nat::encode_u64(&[4]));
    }

    #[test]
    fn rational_coding_roundtrips() {
        for n in -12i64..12 {
            for d in 1i64..9 {
                let q = BigRational::new(BigInt::from(n), BigInt::from(d));
                assert_eq!(decode_rat(&encode_rat(&q)), q);
            }
        }
        let half = encode_rat(&BigRational::new(1.into(), 2.into()));
        let tol1 = SymId::named("qtol").unwrap().eval(&[nat(1)]).unwrap();
        assert_eq!(decode_rat(&tol1), BigRational::one());
        assert_eq!(
            SymId::named("qle").unwrap().eval(&[half, tol1]).unwrap(),
            nat(1)
        );
    }
}
