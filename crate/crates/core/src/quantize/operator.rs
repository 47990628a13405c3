//! Dense operators on V_k in the monomial basis e_0..e_k.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// (k+1)×(k+1) matrix over `Complex<T>`, row-major, in the unnormalized
/// basis e_j = w^j whose Gram matrix is diagonal.
#[derive(Clone, PartialEq)]
pub struct FuzzyOperator<T> {
    k: u32,
    entries: Vec<Complex<T>>,
}

pub type ExactOperator = FuzzyOperator<BigRational>;
pub type FloatOperator = FuzzyOperator<f64>;

/// Squared norms G_j = j!(k−j)!/(k+1)! of the basis sections.
pub fn gram<T: Real>(k: u32) -> Vec<T> {
    (0..=k as u64).map(|j| T::beta(j + 1, k as u64 - j + 1)).collect()
}

pub fn check_level(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::ZeroLevel)
    } else {
        Ok(())
    }
}

impl<T: Real> FuzzyOperator<T> {
    pub fn zeros(k: u32) -> Self {
        let n = (k + 1) as usize;
        Self {
            k,
            entries: vec![Complex::zero(); n * n],
        }
    }

    pub fn identity(k: u32) -> Self {
        Self::diagonal(k, |_| Complex::one())
    }

    pub fn diagonal(k: u32, f: impl Fn(usize) -> Complex<T>) -> Self {
        let mut out = Self::zeros(k);
        for j in 0..out.dim() {
            out.set(j, j, f(j));
        }
        out
    }

    pub fn from_fn(k: u32, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let n = (k + 1) as usize;
        Self {
            k,
            entries: (0..n * n).map(|p| f(p / n, p % n)).collect(),
        }
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        (self.k + 1) as usize
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex<T> {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        let n = self.dim();
        self.entries[i * n + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Complex<T>) {
        let n = self.dim();
        let e = &mut self.entries[i * n + j];
        *e = e.clone() + v.clone();
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn same_level(&self, other: &Self) -> Result<()> {
        if self.k != other.k {
            return Err(Error::LevelMismatch {
                left: self.k,
                right: other.k,
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&Complex<T>) -> Complex<T>) -> Self {
        Self {
            k: self.k,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &Complex<T>) -> Self {
        self.map(|e| e.clone() * s.clone())
    }

    pub fn scale_real(&self, s: &T) -> Self {
        self.map(|e| e.clone().scale(s.clone()))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(self.zip(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(self.zip(other, |a, b| a.clone() - b.clone()))
    }

    fn zip(&self, other: &Self, f: impl Fn(&Complex<T>, &Complex<T>) -> Complex<T>) -> Self {
        Self {
            k: self.k,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        let n = self.dim();
        let mut out = Self::zeros(self.k);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let v = a.clone() * b.clone();
                        out.add_at(i, j, &v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_matmul(other)?.try_sub(&other.try_matmul(self)?)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).fold(Complex::zero(), |acc, j| acc + self.get(j, j).clone())
    }

    /// tr(A B) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex<T>> {
        self.same_level(other)?;
        let n = self.dim();
        let mut acc = Complex::zero();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.get(i, j), other.get(j, i));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
        }
        Ok(acc)
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|e| e.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.k, |i, j| self.get(j, i).clone())
    }

    /// Adjoint for the Gram inner product: A* = G⁻¹ A^† G.
    pub fn gram_adjoint(&self) -> Self {
        let g = gram::<T>(self.k);
        Self::from_fn(self.k, |i, j| {
            self.get(j, i).conj().scale(g[j].clone()).unscale(g[i].clone())
        })
    }

    /// A* = A with respect to the Gram inner product, i.e. G·A is Hermitian.
    pub fn is_gram_hermitian(&self) -> bool {
        self.gram_adjoint() == *self
    }

    pub fn is_gram_anti_hermitian(&self) -> bool {
        self.gram_adjoint() == -self
    }

    pub fn to_float(&self) -> FloatOperator {
        FuzzyOperator {
            k: self.k,
            entries: self
                .entries
                .iter()
                .map(|e| Complex64::new(e.re.as_f64(), e.im.as_f64()))
                .collect(),
        }
    }
}

impl FloatOperator {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }
}

impl<T: Real> Neg for &FuzzyOperator<T> {
    type Output = FuzzyOperator<T>;
    fn neg(self) -> FuzzyOperator<T> {
        self.map(|e| -e.clone())
    }
}

macro_rules! level_checked_op {
    ($tr:ident, $m:ident, $f:ident) => {
        /// Panics on level mismatch; use the `try_` method to get an error.
        impl<T: Real> $tr for &FuzzyOperator<T> {
            type Output = FuzzyOperator<T>;
            fn $m(self, rhs: &FuzzyOperator<T>) -> FuzzyOperator<T> {
                self.$f(rhs).expect("operator levels differ")
            }
        }
    };
}

level_checked_op!(Add, add, try_add);
level_checked_op!(Sub, sub, try_sub);
level_checked_op!(Mul, mul, try_matmul);

impl<T: fmt::Debug> fmt::Debug for FuzzyOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FuzzyOperator(k = {})", self.k)?;
        let n = (self.k + 1) as usize;
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let e = &self.entries[i * n + j];
                    format!("{:?}+{:?}i", e.re, e.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn gram_values() {
        for k in 1..=12u32 {
            let g = gram::<BigRational>(k);
            assert_eq!(g[0], rat(1, k as i64 + 1));
            assert_eq!(g[k as usize], rat(1, k as i64 + 1));
        }
        assert_eq!(gram::<BigRational>(2), vec![rat(1, 3), rat(1, 6), rat(1, 3)]);
    }

    #[test]
    fn algebra_basics() {
        let a = ExactOperator::from_fn(2, |i, j| Complex::new(int((i * 3 + j) as i64), int(1)));
        let id = ExactOperator::identity(2);
        assert_eq!(&a * &id, a);
        assert!(a.commutator(&a).unwrap().is_zero());
        assert_eq!(a.trace(), Complex::new(int(12), int(3)));
        assert_eq!(a.trace_product(&id).unwrap(), a.trace());
        let b = ExactOperator::zeros(3);
        assert!(matches!(a.try_add(&b), Err(Error::LevelMismatch { .. })));
    }
}
