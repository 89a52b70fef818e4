//! Exact coefficient rings.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::{field, smith};

/// Tag naming a coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p")]
pub enum CoefRing {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl CoefRing {
    pub fn is_field(self) -> bool {
        !matches!(self, CoefRing::Integers)
    }

    /// Characteristic of the ring.
    pub fn characteristic(self) -> u64 {
        match self {
            CoefRing::PrimeField(p) => p,
            _ => 0,
        }
    }

    /// Whether `n` is invertible in the ring.
    pub fn inverts(self, n: u64) -> bool {
        match self {
            CoefRing::Integers => n == 1,
            CoefRing::Rationals => n != 0,
            CoefRing::PrimeField(p) => n % p != 0,
        }
    }
}

impl std::str::FromStr for CoefRing {
    type Err = LinalgError;

    /// `Z`, `Q` or `F<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" => Ok(CoefRing::Integers),
            "Q" => Ok(CoefRing::Rationals),
            t => t
                .strip_prefix('F')
                .and_then(|p| p.parse().ok())
                .map(CoefRing::PrimeField)
                .ok_or_else(|| LinalgError::Parse(s.to_string())),
        }
    }
}

impl fmt::Display for CoefRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefRing::Integers => write!(f, "Z"),
            CoefRing::Rationals => write!(f, "Q"),
            CoefRing::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact scalar together with the linear algebra the library needs over it.
///
/// Fields answer with Gaussian elimination, the integers with Smith normal form.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    fn ring() -> CoefRing;
    fn from_i64(v: i64) -> Self;
    fn parse_decimal(s: &str) -> Result<Self, LinalgError>;
    fn is_unit(&self) -> bool;
    fn unit_inverse(&self) -> Option<Self>;

    fn rank(m: &Matrix<Self>) -> usize;
    /// Columns form a basis of the kernel (a lattice basis over the integers).
    fn kernel(m: &Matrix<Self>) -> Matrix<Self>;
    /// Some `x` with `a * x = b`, if one exists.
    fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Option<Matrix<Self>>;
    /// Nonzero invariant factors, ascending; all ones over a field.
    fn invariant_factors(m: &Matrix<Self>) -> Result<Vec<BigInt>, LinalgError>;
}

/// A scalar in which every nonzero element is invertible.
pub trait Field: Scalar + Div<Output = Self> {
    fn inv(&self) -> Self;
}

/// Integer scalars; overflow is a bug at desk scale and panics in debug builds.
pub type Integer = i64;
pub type Rational = BigRational;

impl Scalar for i64 {
    fn ring() -> CoefRing {
        CoefRing::Integers
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn parse_decimal(s: &str) -> Result<Self, LinalgError> {
        s.trim()
            .parse()
            .map_err(|_| LinalgError::Parse(s.to_string()))
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.is_unit().then_some(*self)
    }
    fn rank(m: &Matrix<Self>) -> usize {
        smith::integer_rank(m)
    }
    fn kernel(m: &Matrix<Self>) -> Matrix<Self> {
        smith::integer_kernel(m)
    }
    fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Option<Matrix<Self>> {
        smith::integer_solve(a, b)
    }
    fn invariant_factors(m: &Matrix<Self>) -> Result<Vec<BigInt>, LinalgError> {
        smith::invariant_factors(m)
    }
}

macro_rules! field_linear_algebra {
    () => {
        fn rank(m: &Matrix<Self>) -> usize {
            field::rank(m)
        }
        fn kernel(m: &Matrix<Self>) -> Matrix<Self> {
            field::kernel(m)
        }
        fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Option<Matrix<Self>> {
            field::solve(a, b)
        }
        fn invariant_factors(m: &Matrix<Self>) -> Result<Vec<BigInt>, LinalgError> {
            Ok(vec![BigInt::one(); field::rank(m)])
        }
    };
}

impl Scalar for BigRational {
    fn ring() -> CoefRing {
        CoefRing::Rationals
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn parse_decimal(s: &str) -> Result<Self, LinalgError> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| LinalgError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(LinalgError::Parse(s.to_string()));
                }
                Ok(BigRational::new(parse_int(n)?, d))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }
    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
    fn unit_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn rank(m: &Matrix<Self>) -> usize {
        integral_columns(m)
            .and_then(|z| smith::invariant_factors(&z).ok())
            .map_or_else(|| field::rank(m), |f| f.len())
    }
    fn kernel(m: &Matrix<Self>) -> Matrix<Self> {
        field::kernel(m)
    }
    fn solve(a: &Matrix<Self>, b: &Matrix<Self>) -> Option<Matrix<Self>> {
        field::solve(a, b)
    }
    fn invariant_factors(m: &Matrix<Self>) -> Result<Vec<BigInt>, LinalgError> {
        Ok(vec![BigInt::one(); Self::rank(m)])
    }
}

/// Each column scaled by its common denominator, if every entry then fits in an `i64`.
fn integral_columns(m: &Matrix<BigRational>) -> Option<Matrix<i64>> {
    let mut trip = Vec::with_capacity(m.nnz());
    for (j, col) in m.columns().into_iter().enumerate() {
        let den = col
            .iter()
            .fold(BigInt::one(), |acc, (_, x)| num_integer::Integer::lcm(&acc, x.denom()));
        for (i, x) in col {
            let v = (x.numer() * (&den / x.denom())).to_i64()?;
            trip.push((i, j, v));
        }
    }
    Some(Matrix::from_triplets(m.rows(), m.cols(), trip))
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// The prime field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }
    pub fn value(self) -> u64 {
        self.0
    }
    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Fp(acc)
    }
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u64> AddAssign for Fp<P> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(self.0 * o.0 % P)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn ring() -> CoefRing {
        CoefRing::PrimeField(P)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn parse_decimal(s: &str) -> Result<Self, LinalgError> {
        let v: BigInt = s
            .trim()
            .parse()
            .map_err(|_| LinalgError::Parse(s.to_string()))?;
        let r = ((v % BigInt::from(P)) + BigInt::from(P)) % BigInt::from(P);
        Ok(Fp(r.to_u64().expect("residue fits")))
    }
    fn is_unit(&self) -> bool {
        self.0 != 0
    }
    fn unit_inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.inv())
    }
    field_linear_algebra!();
}

impl<const P: u64> Field for Fp<P> {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in F_{P}");
        self.pow(P - 2)
    }
}

/// Converts a big integer to a scalar of any ring (reduction mod p for prime fields).
pub fn scalar_from_bigint<S: Scalar>(v: &BigInt) -> S {
    match v.to_i64() {
        Some(x) => S::from_i64(x),
        None => S::parse_decimal(&v.to_string()).expect("decimal round trip"),
    }
}
