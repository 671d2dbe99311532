//! Exact arithmetic: rationals, polynomials in highest-weight coordinates,
//! fraction-free determinants.

mod det;
mod wpoly;

pub use det::{bareiss_det, cofactor_det};
pub use wpoly::{Mono, VarSpace, WPoly, WeightVar};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    s.parse::<Rational>()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// `(-2)^e` for a possibly negative exponent.
pub fn pow_neg2(e: i32) -> Rational {
    let base = int(-2);
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

/// Coefficient rings usable by the enveloping algebra and Verma modules.
///
/// `Ctx` carries whatever a ring needs to build constants (the variable list
/// for polynomials, nothing for rationals).
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Clone + fmt::Debug + Send + Sync;

    fn constant(ctx: &Self::Ctx, r: Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Exact quotient, `None` when `other` does not divide `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;

    fn neg_ref(&self) -> Self {
        self.scale(&int(-1))
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoCtx;

impl Coeff for Rational {
    type Ctx = NoCtx;

    fn constant(_: &NoCtx, r: Rational) -> Self {
        r
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

impl Coeff for WPoly {
    type Ctx = std::sync::Arc<VarSpace>;

    fn constant(ctx: &Self::Ctx, r: Rational) -> Self {
        WPoly::constant(ctx.clone(), r)
    }
    fn vanishes(&self) -> bool {
        WPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.try_add(other).expect("variable list mismatch")
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.try_mul(other).expect("variable list mismatch")
    }
    fn scale(&self, r: &Rational) -> Self {
        WPoly::scale(self, r)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.trial_divide(other).ok().flatten()
    }
}

/// Format a rational the way every text artifact does: `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

