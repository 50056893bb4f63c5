//! Truncated complex power series in one variable.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Coefficients `c_0 .. c_{N-1}` of a series modulo `s^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series(pub Vec<Complex64>);

impl Series {
    pub fn constant(c: Complex64, len: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[0] = c;
        Series(v)
    }

    pub fn real(c: f64, len: usize) -> Self {
        Series::constant(Complex64::new(c, 0.0), len)
    }

    /// The variable `s`.
    pub fn var(len: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[1] = Complex64::new(1.0, 0.0);
        Series(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.0[k]
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Series(self.0.iter().map(|c| c * a).collect())
    }

    pub fn recip(&self) -> Self {
        let n = self.len();
        let a0 = self.0[0];
        assert!(a0.norm() > 0.0, "reciprocal of a series with zero constant term");
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = 1.0 / a0;
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|i| self.0[i] * b[k - i]).sum();
            b[k] = -s / a0;
        }
        Series(b)
    }

    pub fn div(&self, other: &Series) -> Self {
        self * &other.recip()
    }

    /// Principal square root of the constant term, extended formally.
    pub fn sqrt(&self) -> Self {
        let n = self.len();
        let b0 = self.0[0].sqrt();
        assert!(b0.norm() > 0.0, "square root of a series with zero constant term");
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = b0;
        for k in 1..n {
            let s: Complex64 = (1..k).map(|i| b[i] * b[k - i]).sum();
            b[k] = (self.0[k] - s) / (2.0 * b0);
        }
        Series(b)
    }

    fn derivative(&self) -> Self {
        let n = self.len();
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            d[k - 1] = self.0[k] * k as f64;
        }
        Series(d)
    }

    /// Principal logarithm of the constant term, extended formally.
    pub fn ln(&self) -> Self {
        let n = self.len();
        let q = self.derivative().div(self);
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = self.0[0].ln();
        for k in 1..n {
            b[k] = q.0[k - 1] / k as f64;
        }
        Series(b)
    }

    pub fn exp(&self) -> Self {
        let n = self.len();
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = self.0[0].exp();
        for k in 1..n {
            let s: Complex64 = (1..=k).map(|i| self.0[i] * b[k - i] * i as f64).sum();
            b[k] = s / k as f64;
        }
        Series(b)
    }

    /// `self^p` on the principal branch.
    pub fn powf(&self, p: f64) -> Self {
        self.ln().scale(Complex64::new(p, 0.0)).exp()
    }

    /// `self ∘ g`; needs `g(0) = 0`.
    pub fn compose(&self, g: &Series) -> Self {
        assert!(g.0[0].norm() == 0.0, "inner series must vanish at 0");
        let n = self.len();
        let mut r = Series::constant(self.0[n - 1], n);
        for k in (0..n - 1).rev() {
            r = &r * g;
            r.0[0] += self.0[k];
        }
        r
    }

    /// Compositional inverse; needs `f(0) = 0` and `f'(0) ≠ 0`.
    pub fn revert(&self) -> Self {
        let n = self.len();
        let f1 = self.0[1];
        assert!(self.0[0].norm() == 0.0 && f1.norm() > 0.0, "series is not invertible at 0");
        let mut g = Series::var(n).scale(1.0 / f1);
        for k in 2..n {
            let e = self.compose(&g).0[k];
            g.0[k] -= e / f1;
        }
        g
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.len();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.0.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += a * o.0[j];
            }
        }
        Series(c)
    }
}
