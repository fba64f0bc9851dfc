//! Scalar abstraction shared by every geometric routine.
//!
//! Coordinates and lengths are generic over [`Scalar`], which is implemented
//! for `f32`, `f64` and the exact type [`BigRational`]. Exact instantiations
//! matter for constructions whose defining points need more than 53 bits of
//! mantissa (dyadic points such as `2^-k + l 4^-k` for large `k`).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// A coordinate type: an ordered field with a floor operation and a
/// (possibly approximate) square root.
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
{
    /// Integer type of grid-cell indices produced by [`Scalar::cell_index`].
    type Cell: Clone + Ord + Hash + Debug + Send + Sync;

    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Points closer than this are merged when a cloud is built.
    fn dedup_tolerance() -> Self;

    /// Per-entry tolerance for `OᵀO = I` checks.
    fn orthogonality_tolerance() -> Self;

    /// Square root. Exact on perfect squares for exact types, otherwise
    /// rounded through `f64`.
    fn square_root(&self) -> Self;

    /// `floor(self)` as a cell index.
    fn cell_index(&self) -> Self::Cell;

    /// `floor(self / side)` for `side > 0`.
    fn cell_of(&self, side: &Self) -> Self::Cell {
        (self.clone() / side.clone()).cell_index()
    }

    fn is_finite_value(&self) -> bool;

    fn from_f64_lossy(x: f64) -> Self;

    fn lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar type represents i64 values")
    }

    /// `num / den`, exact for exact types.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    fn pow_int(&self, exp: i32) -> Self {
        let mut base = if exp < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            type Cell = i64;
            const EXACT: bool = false;

            fn dedup_tolerance() -> Self {
                1e-12
            }

            fn orthogonality_tolerance() -> Self {
                $tol
            }

            fn square_root(&self) -> Self {
                self.sqrt()
            }

            fn cell_index(&self) -> i64 {
                // `as` saturates; values past i64 range are past f64 precision anyway.
                self.floor() as i64
            }

            fn is_finite_value(&self) -> bool {
                self.is_finite()
            }

            fn from_f64_lossy(x: f64) -> Self {
                x as $t
            }
        }
    };
}

float_scalar!(f64, 1e-10);
float_scalar!(f32, 1e-5);

impl Scalar for BigRational {
    type Cell = BigInt;
    const EXACT: bool = true;

    fn dedup_tolerance() -> Self {
        Self::zero()
    }

    fn orthogonality_tolerance() -> Self {
        Self::zero()
    }

    fn square_root(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if !self.is_negative() {
            let (n, d) = (self.numer(), self.denom());
            let (rn, rd) = (n.sqrt(), d.sqrt());
            if &(&rn * &rn) == n && &(&rd * &rd) == d {
                return BigRational::new(rn, rd);
            }
        }
        Self::from_f64_lossy(self.lossy().sqrt())
    }

    fn cell_index(&self) -> BigInt {
        self.floor().to_integer()
    }

    fn cell_of(&self, side: &Self) -> BigInt {
        // Skips the gcd normalisation of a rational quotient.
        (self.numer() * side.denom()).div_floor(&(self.denom() * side.numer()))
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(Self::zero)
    }
}

/// Largest of two partially ordered values (first wins on ties/NaN).
pub(crate) fn max_of<T: PartialOrd>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min_of<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// `2^e` without rounding for every scalar type.
pub fn two_pow<T: Scalar>(e: i32) -> T {
    (T::one() + T::one()).pow_int(e)
}
