use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use super::real::truncated_sqrt;
use super::{ceil_log2, l1_norm, linf_norm, pow2_neg, rat, CauchyReal, GaussianRat, Irregularity, Polynomial, Rat};

/// A complex number as a pair of regular streams. Both components read one
/// shared, memoised stream of Gaussian rationals.
#[derive(Clone)]
pub struct ComplexC {
    pub re: CauchyReal,
    pub im: CauchyReal,
}

impl fmt::Debug for ComplexC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexC({}, {})", self.re.label(), self.im.label())
    }
}

impl ComplexC {
    pub fn new(re: CauchyReal, im: CauchyReal) -> Self {
        ComplexC { re, im }
    }

    pub fn from_gaussian(z: GaussianRat) -> Self {
        ComplexC { re: CauchyReal::from_rat(z.re), im: CauchyReal::from_rat(z.im) }
    }

    pub fn from_stream(label: &str, f: impl Fn(u64) -> GaussianRat + Send + Sync + 'static) -> Self {
        let memo: Arc<Mutex<HashMap<u64, GaussianRat>>> = Arc::default();
        let f = Arc::new(f);
        let get = move |s: u64| -> GaussianRat {
            if let Some(v) = memo.lock().unwrap().get(&s) {
                return v.clone();
            }
            let v = f(s);
            memo.lock().unwrap().entry(s).or_insert(v).clone()
        };
        let get = Arc::new(get);
        let g = get.clone();
        ComplexC {
            re: CauchyReal::new(format!("re {label}"), move |s| get(s).re),
            im: CauchyReal::new(format!("im {label}"), move |s| g(s).im),
        }
    }

    pub fn at(&self, s: u64) -> GaussianRat {
        Complex::new(self.re.at(s), self.im.at(s))
    }

    pub fn check_regular(&self, depth: u64) -> Option<Irregularity> {
        self.re.check_regular(depth).or_else(|| self.im.check_regular(depth))
    }
}

/// Within `2^{-k}` of `√q`, for `q ≥ 0`; zero for negative `q`.
pub fn sqrt_rat(q: &Rat, k: u64) -> Rat {
    truncated_sqrt(q, k + 1)
}

/// The principal square root of `z` to within `2^{-k}` in each component:
/// nonnegative real part, nonnegative imaginary part when the real part is 0.
pub fn principal_sqrt(z: &GaussianRat, k: u64) -> GaussianRat {
    let two = rat(2, 1);
    let modulus = sqrt_rat(&(z.re.clone() * &z.re + z.im.clone() * &z.im), 2 * k + 4);
    let half = |v: Rat| if v.is_negative() { Rat::zero() } else { v / two.clone() };
    let re = sqrt_rat(&half(modulus.clone() + &z.re), k + 1);
    let im = sqrt_rat(&half(modulus - &z.re), k + 1);
    Complex::new(re, if z.im.is_negative() { -im } else { im })
}

/// Per-index principal square roots. Stage `t` of an output reads its input at
/// stage `2k + 2` with `k = t + 3 + m`, where `2^m` bounds `2|√z| + 2`; this
/// keeps the output regular and `|w(s)² − z(s)| ≤ 2^{1−s}` in each
/// component, away from a branch-cut crossing of the input approximations.
pub fn seq_sqrt(inputs: &[ComplexC]) -> Vec<ComplexC> {
    inputs
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let z = z.clone();
            let bound = l1_norm(&z.at(0)) + rat(2, 1);
            let m = ceil_log2(&(bound * rat(2, 1) + rat(2, 1)));
            ComplexC::from_stream(&format!("sqrt #{i}"), move |t| {
                let k = t + 3 + m;
                principal_sqrt(&z.at(2 * k + 2), k + 1)
            })
        })
        .collect()
}

/// `(|Re(w(s)² − z(s))|, |Im(w(s)² − z(s))|)`
pub fn sqrt_residual(z: &ComplexC, w: &ComplexC, s: u64) -> (Rat, Rat) {
    let ws = w.at(s);
    let d = ws.clone() * ws - z.at(s);
    (d.re.abs(), d.im.abs())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FtaError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has degree 0")]
    Constant,
    #[error("subdivision kept more than {0} squares at one level")]
    Budget(usize),
}

/// Squares kept per subdivision level before giving up.
pub const FTA_SQUARE_BUDGET: usize = 1 << 14;

/// An approximate root found by subdivision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FtaRoot {
    #[serde(serialize_with = "ser_gaussian")]
    pub root: GaussianRat,
    pub stage: u64,
    /// Half-width of the final square.
    #[serde(serialize_with = "ser_rat")]
    pub half_width: Rat,
    pub levels: u64,
    pub squares: usize,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_gaussian<S: serde::Serializer>(z: &GaussianRat, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([z.re.to_string(), z.im.to_string()])
}

impl FtaRoot {
    /// The root as a constant stream.
    pub fn as_complex(&self) -> ComplexC {
        ComplexC::from_gaussian(self.root.clone())
    }
}

/// `|z|² ≤ 4^{-s}`
fn small(z: &GaussianRat, s: u64) -> bool {
    let e = pow2_neg(s);
    z.re.clone() * &z.re + z.im.clone() * &z.im <= e.clone() * e
}

/// A point with `|p(ζ)| ≤ 2^{-s}` on a square of half-width `≤ 2^{-s}`. The
/// search starts from the square of half-width `2^⌈log₂ R⌉` around 0, with
/// `R = 1 + max |a_i|` bounding every root, and discards a square when
/// `|p(c)| > Σ_{k≥1} |p^{(k)}(c)/k!| r^k` for its circumradius `r`, which
/// rules out a root in the disc around it.
pub fn fta_root_exact(p: &Polynomial<GaussianRat>, s: u64) -> Result<FtaRoot, FtaError> {
    if p.degree() == 0 {
        return Err(FtaError::Constant);
    }
    if !p.is_monic() {
        return Err(FtaError::NotMonic);
    }
    let n = p.degree();
    let bound = p.coeffs()[..n].iter().map(l1_norm).fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let mut h = Rat::one();
    let r0 = bound + Rat::one();
    while h < r0 {
        h *= rat(2, 1);
    }
    let eps = pow2_neg(s);
    let mut level = vec![GaussianRat::zero()];
    let mut squares = 0;
    let mut levels = 0;
    loop {
        let r = h.clone() * rat(3, 2);
        let mut next = Vec::new();
        for c in &level {
            squares += 1;
            let shifted = p.taylor_shift(c);
            let b = shifted.coeffs();
            if h <= eps && small(&b[0], s) {
                return Ok(FtaRoot { root: c.clone(), stage: s, half_width: h, levels, squares });
            }
            let mut rk = Rat::one();
            let mut rhs = Rat::zero();
            for bk in &b[1..] {
                rk *= &r;
                rhs += l1_norm(bk) * &rk;
            }
            if linf_norm(&b[0]) > rhs {
                continue;
            }
            let q = h.clone() / rat(2, 1);
            for (dx, dy) in [(-1, -1), (1, -1), (-1, 1), (1, 1)] {
                next.push(Complex::new(c.re.clone() + q.clone() * rat(dx, 1), c.im.clone() + q.clone() * rat(dy, 1)));
            }
        }
        if next.len() > FTA_SQUARE_BUDGET {
            return Err(FtaError::Budget(FTA_SQUARE_BUDGET));
        }
        level = next;
        h /= rat(2, 1);
        levels += 1;
    }
}

/// Root of `ζⁿ + a_1 ζ^{n−1} + ⋯ + a_n` for stream coefficients: the exact
/// search runs on stage-`u` approximations at precision `s + 1`, with `u`
/// large enough that the coefficient error adds at most `2^{-s-1}` at any
/// point within three times the stage-0 root bound.
pub fn fta_root(tail: &[ComplexC], s: u64) -> Result<FtaRoot, FtaError> {
    let n = tail.len();
    if n == 0 {
        return Err(FtaError::Constant);
    }
    let r0 = tail.iter().map(|a| l1_norm(&a.at(0)) + rat(2, 1)).fold(Rat::zero(), |a, b| if b > a { b } else { a })
        + Rat::one();
    let z = r0 * rat(3, 1);
    let mut growth = Rat::from_integer((n as i64).into());
    for _ in 0..n {
        growth *= &z;
    }
    let u = s + 2 + ceil_log2(&growth);
    let approx: Vec<GaussianRat> = tail.iter().map(|a| a.at(u)).collect();
    let mut root = fta_root_exact(&Polynomial::monic(&approx), s + 1)?;
    root.stage = s;
    Ok(root)
}

/// All roots of a monic `f64` polynomial by Weierstrass iteration.
pub fn durand_kerner(p: &Polynomial<Complex<f64>>, max_iters: usize) -> Vec<Complex<f64>> {
    let n = p.degree();
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..max_iters {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = p.eval(&z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}
