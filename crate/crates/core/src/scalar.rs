//! Scalar regimes.
//!
//! Every routine that builds divisions or sums is generic over [`Scalar`].
//! Two regimes exist: plain `f64` for ordinary numerics, and [`QuadExt`],
//! exact numbers `p + q·√2` with rational `p`, `q`. The exact regime exists
//! because every float is rational, so an indicator of the rationals is
//! constant on floats and carries no information there.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Which arithmetic a scalar type performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarRegime {
    Float,
    Exact,
}

/// Ordered field-like scalar used for division coordinates and integrand values.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const REGIME: ScalarRegime;

    fn zero() -> Self;
    fn one() -> Self;

    /// Exact `num / den` in the exact regime, nearest float otherwise.
    fn from_ratio(num: i64, den: u64) -> Self;

    /// Converts a finite float. Exact in both regimes (floats are dyadic rationals).
    ///
    /// Panics on NaN or infinity.
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// `self · num / den`.
    fn mul_ratio(&self, num: i64, den: u64) -> Self;

    /// `(√2 − 1)/2`, an irrational number in `]0, 1[` (approximated for floats).
    fn irrational_offset() -> Self;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn half(&self) -> Self {
        self.mul_ratio(1, 2)
    }

    /// Sum of `terms` in the given order. Floats may opt into compensated
    /// (Neumaier) summation; exact scalars ignore the flag.
    fn sum_ordered(terms: &[Self], compensated: bool) -> Self {
        let _ = compensated;
        terms
            .iter()
            .cloned()
            .fold(Self::zero(), |acc, x| acc + x)
    }
}

impl Scalar for f64 {
    const REGIME: ScalarRegime = ScalarRegime::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite scalar {x}");
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn mul_ratio(&self, num: i64, den: u64) -> Self {
        self * num as f64 / den as f64
    }

    fn irrational_offset() -> Self {
        (std::f64::consts::SQRT_2 - 1.0) / 2.0
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sum_ordered(terms: &[Self], compensated: bool) -> Self {
        if !compensated {
            return terms.iter().fold(0.0, |acc, x| acc + x);
        }
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for &x in terms {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                carry += (sum - t) + x;
            } else {
                carry += (x - t) + sum;
            }
            sum = t;
        }
        sum + carry
    }
}

/// Exact element `p + q·√2` of the field ℚ(√2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    p: BigRational,
    q: BigRational,
}

impl QuadExt {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        QuadExt { p, q }
    }

    pub fn rational(p: BigRational) -> Self {
        QuadExt {
            p,
            q: BigRational::zero(),
        }
    }

    /// `num/den` as an exact rational.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `(p_num/p_den) + (q_num/q_den)·√2`.
    pub fn from_parts(p_num: i64, p_den: i64, q_num: i64, q_den: i64) -> Self {
        QuadExt {
            p: BigRational::new(p_num.into(), p_den.into()),
            q: BigRational::new(q_num.into(), q_den.into()),
        }
    }

    pub fn sqrt2() -> Self {
        Self::from_parts(0, 1, 1, 1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.q
    }

    /// True iff the number is rational, i.e. its √2 coefficient vanishes.
    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// Sign of `p + q√2`, decided exactly.
    pub fn signum(&self) -> Ordering {
        let zero = BigRational::zero();
        let sp = self.p.cmp(&zero);
        let sq = self.q.cmp(&zero);
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            // opposite signs: compare p² with 2q²
            (sp, _) => {
                let p2 = &self.p * &self.p;
                let q2 = &self.q * &self.q * BigRational::from_integer(2.into());
                match p2.cmp(&q2) {
                    Ordering::Greater => sp,
                    Ordering::Less => sp.reverse(),
                    Ordering::Equal => Ordering::Equal, // unreachable for q ≠ 0
                }
            }
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({} + {}·√2)", self.p, self.q)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "{}√2", self.q)
        } else if self.q.is_negative() {
            write!(f, "{} - {}√2", self.p, -&self.q)
        } else {
            write!(f, "{} + {}√2", self.p, self.q)
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum()
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        QuadExt {
            p: self.p + rhs.p,
            q: self.q + rhs.q,
        }
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        QuadExt {
            p: self.p - rhs.p,
            q: self.q - rhs.q,
        }
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let two = BigRational::from_integer(2.into());
        QuadExt {
            p: &self.p * &rhs.p + two * (&self.q * &rhs.q),
            q: &self.p * &rhs.q + &self.q * &rhs.p,
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            p: -self.p,
            q: -self.q,
        }
    }
}

impl Scalar for QuadExt {
    const REGIME: ScalarRegime = ScalarRegime::Exact;

    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    fn one() -> Self {
        Self::rational(BigRational::one())
    }

    fn from_ratio(num: i64, den: u64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    fn from_f64(x: f64) -> Self {
        let r = BigRational::from_f64(x).unwrap_or_else(|| panic!("non-finite scalar {x}"));
        Self::rational(r)
    }

    fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        p + q * std::f64::consts::SQRT_2
    }

    fn mul_ratio(&self, num: i64, den: u64) -> Self {
        let r = BigRational::new(num.into(), den.into());
        QuadExt {
            p: &self.p * &r,
            q: &self.q * &r,
        }
    }

    fn irrational_offset() -> Self {
        Self::from_parts(-1, 2, 1, 2)
    }

    fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}
