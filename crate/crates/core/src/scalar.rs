//! Exact scalars: Gaussian rationals, rational multiples of powers of π, and
//! the `Real` abstraction shared by the exact and floating-point operator paths.

use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Gaussian rational `p + q i`.
pub type Gaussian = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Gaussian rational from a real rational.
pub fn real(q: BigRational) -> Gaussian {
    Complex::new(q, BigRational::zero())
}

pub fn gauss(re: BigRational, im: BigRational) -> Gaussian {
    Complex::new(re, im)
}

/// Gaussian integer `re + im i`.
pub fn gi(re: i64, im: i64) -> Gaussian {
    Complex::new(int(re), int(im))
}

pub fn imag_unit() -> Gaussian {
    gi(0, 1)
}

pub fn gaussian_to_c64(z: &Gaussian) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(s.to_string()));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(s.to_string()));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(n-1)!!` for even `n >= 0`, i.e. the product of odd numbers below `n`.
/// Used by the sphere moment formula; `odd_double_factorial(0) = 1`.
pub fn odd_double_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = 1;
    while i < n {
        acc *= BigInt::from(i);
        i += 2;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Scalar field underlying a [`FuzzyOperator`](crate::quantize::FuzzyOperator):
/// exact rationals or doubles. Operator entries are `Complex<T>`.
pub trait Real:
    Clone + fmt::Debug + PartialEq + num_traits::Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_rational(q: &BigRational) -> Self;

    /// Euler Beta function `B(a, b) = (a-1)!(b-1)!/(a+b-1)!` at positive integers.
    fn beta(a: u64, b: u64) -> Self;

    fn as_f64(&self) -> f64;

    fn from_gaussian(z: &Gaussian) -> Complex<Self> {
        Complex::new(Self::from_rational(&z.re), Self::from_rational(&z.im))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&int(n))
    }
}

impl Real for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn beta(a: u64, b: u64) -> Self {
        assert!(a >= 1 && b >= 1, "Beta arguments must be positive");
        BigRational::new(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))
    }

    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

const FACTORIAL_TABLE_LEN: usize = 171;

fn float_factorials() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; FACTORIAL_TABLE_LEN];
        for i in 1..FACTORIAL_TABLE_LEN {
            t[i] = t[i - 1] * i as f64;
        }
        t
    })
}

fn ln_factorial(n: u64) -> f64 {
    let t = float_factorials();
    if (n as usize) < FACTORIAL_TABLE_LEN {
        return t[n as usize].ln();
    }
    let base = t[FACTORIAL_TABLE_LEN - 1].ln();
    base + ((FACTORIAL_TABLE_LEN as u64)..=n).map(|i| (i as f64).ln()).sum::<f64>()
}

impl Real for f64 {
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn beta(a: u64, b: u64) -> Self {
        assert!(a >= 1 && b >= 1, "Beta arguments must be positive");
        let t = float_factorials();
        let n = (a + b - 1) as usize;
        if n < FACTORIAL_TABLE_LEN {
            t[(a - 1) as usize] * t[(b - 1) as usize] / t[n]
        } else {
            (ln_factorial(a - 1) + ln_factorial(b - 1) - ln_factorial(a + b - 1)).exp()
        }
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

/// Exact value `coeff · π^pi_power` with a Gaussian-rational coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicScalar {
    pub coeff: Gaussian,
    pub pi_power: i32,
}

impl SymbolicScalar {
    pub fn new(coeff: Gaussian, pi_power: i32) -> Self {
        Self { coeff, pi_power }
    }

    pub fn rational(q: BigRational, pi_power: i32) -> Self {
        Self::new(real(q), pi_power)
    }

    pub fn zero() -> Self {
        Self::new(Gaussian::zero(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.coeff.im.is_zero()
    }

    /// Sum of two scalars. Zero is compatible with every π-power.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(Error::MixedPiPowers {
                left: self.pi_power,
                right: other.pi_power,
            });
        }
        Ok(Self::new(&self.coeff + &other.coeff, self.pi_power))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other.clone())
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        Self::new(&self.coeff * c, self.pi_power)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a SymbolicScalar>) -> Result<Self> {
        items.into_iter().try_fold(Self::zero(), |acc, x| acc.try_add(x))
    }

    /// Magnitude of the coefficient, `|coeff|²` kept exact.
    pub fn coeff_norm_sqr(&self) -> BigRational {
        &self.coeff.re * &self.coeff.re + &self.coeff.im * &self.coeff.im
    }

    /// Float value, collapsing π only here.
    pub fn to_c64(&self) -> Complex64 {
        gaussian_to_c64(&self.coeff) * std::f64::consts::PI.powi(self.pi_power)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_c64().re
    }
}

impl Neg for SymbolicScalar {
    type Output = SymbolicScalar;
    fn neg(self) -> SymbolicScalar {
        SymbolicScalar::new(-self.coeff, self.pi_power)
    }
}

impl Mul for &SymbolicScalar {
    type Output = SymbolicScalar;
    fn mul(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        SymbolicScalar::new(&self.coeff * &rhs.coeff, self.pi_power + rhs.pi_power)
    }
}

impl Mul for SymbolicScalar {
    type Output = SymbolicScalar;
    fn mul(self, rhs: SymbolicScalar) -> SymbolicScalar {
        &self * &rhs
    }
}

pub fn format_gaussian(z: &Gaussian) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        (false, false) => {
            let sign = if z.im.is_negative() { '-' } else { '+' };
            format!("({} {} {}i)", z.re, sign, z.im.abs())
        }
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = format_gaussian(&self.coeff);
        match self.pi_power {
            _ if self.is_zero() => write!(f, "0"),
            0 => write!(f, "{c}"),
            1 => write!(f, "{c}·π"),
            p => write!(f, "{c}·π^{p}"),
        }
    }
}
