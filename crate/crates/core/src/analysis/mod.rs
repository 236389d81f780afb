//! Constructive analysis at desk scale: Cauchy reals as exact rational
//! streams, the order relations, the dichotomy and Dedekind constructions as
//! leftmost paths through bounded trees, sequential square roots, a
//! subdivision root finder, and Cramer's rule.
//!
//! [`Matrix`] and [`Polynomial`] are generic over `num-traits` scalars. The
//! exact instances use [`Rat`] and [`GaussianRat`]; `f64` instances back the
//! numeric cross-checks.

mod complex;
mod matrix;
mod poly;
mod real;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use complex::{
    durand_kerner, fta_root, fta_root_exact, principal_sqrt, seq_sqrt, sqrt_rat, sqrt_residual, ComplexC,
    FtaError, FtaRoot,
};
pub use matrix::{matrix_inverse, Matrix, MatrixError};
pub use poly::Polynomial;
pub use real::{
    cauchy_to_dedekind, compare, cut_brackets, lpo_probe, r_holds, r_tree, rational_enumeration, seq_dichotomy, CauchyReal,
    Comparison, DedekindError, DedekindPath, DichotomyError, Irregularity, LpoOutcome, ENUMERATION_ID,
};

pub type Rat = BigRational;
pub type RatMatrix = Matrix<Rat>;
pub type GaussianRat = Complex<Rat>;

/// `2^{-s}`
pub fn pow2_neg(s: u64) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << s)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or an integer.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let r: Rat = s.trim().parse().ok()?;
    (!r.denom().is_zero()).then_some(r)
}

/// `|re| + |im|`, an upper bound for the modulus.
pub fn l1_norm(z: &GaussianRat) -> Rat {
    z.re.abs() + z.im.abs()
}

/// `max(|re|, |im|)`, a lower bound for the modulus.
pub fn linf_norm(z: &GaussianRat) -> Rat {
    let (a, b) = (z.re.abs(), z.im.abs());
    if a > b {
        a
    } else {
        b
    }
}

pub fn gaussian(re: Rat, im: Rat) -> GaussianRat {
    Complex::new(re, im)
}

/// The smallest `k` with `r ≤ 2^k`, for `r ≥ 0` (zero for `r ≤ 1`).
pub fn ceil_log2(r: &Rat) -> u64 {
    let mut k = 0;
    let mut p = Rat::one();
    while &p < r {
        p *= rat(2, 1);
        k += 1;
    }
    k
}
