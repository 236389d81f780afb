use num_traits::Num;

/// `c_0 + c_1 z + ⋯ + c_n z^n`, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Num> Polynomial<T> {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(T::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `z^n + a_1 z^{n−1} + ⋯ + a_n` from `[a_1, …, a_n]`.
    pub fn monic(tail: &[T]) -> Self {
        let mut c: Vec<T> = tail.iter().rev().cloned().collect();
        c.push(T::one());
        Polynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(T::is_one)
    }

    /// Horner.
    pub fn eval(&self, z: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut k = T::zero();
        for c in self.coeffs.iter().skip(1) {
            k = k + T::one();
            out.push(c.clone() * k.clone());
        }
        if out.is_empty() {
            out.push(T::zero());
        }
        Polynomial::new(out)
    }

    /// Coefficients of `p(c + z)`, by repeated synthetic division.
    pub fn taylor_shift(&self, c: &T) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let v = a[j].clone() + c.clone() * a[j + 1].clone();
                a[j] = v;
            }
        }
        Polynomial { coeffs: a }
    }

    pub fn map<U: Clone + Num>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}
