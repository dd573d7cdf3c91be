//! Exact arithmetic in `Q(sqrt(q))` for a fixed non-square prime `q`.
//!
//! Elements are stored as `rat + surd * sqrt(q)` with arbitrary-precision
//! rational parts.  The quantum parameter is `v = sqrt(q)`, so `v^n` is
//! rational for even `n` and a pure surd for odd `n`.  For non-square `q`
//! the representation is unique and equality is componentwise; if `q`
//! happens to be a perfect square the surd part is folded into the rational
//! part on construction, so canonical forms stay unique either way.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An element `rat + surd * sqrt(q)` of `Q(sqrt(q))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    q: u32,
    rat: BigRational,
    surd: BigRational,
}

/// Serialized form: both parts as exact rational strings.
#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    rat: String,
    surd: String,
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `q^e` for a (possibly negative) integer exponent.
fn q_pow(q: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        base.pow(e as u64 as i64)
    } else {
        base.pow(e)
    }
}

impl Coeff {
    /// The zero of the context.  `q` must be one of the supported primes.
    pub fn zero(q: u32) -> Coeff {
        Coeff { q, rat: BigRational::zero(), surd: BigRational::zero() }
    }

    pub fn one(q: u32) -> Coeff {
        Coeff { q, rat: BigRational::one(), surd: BigRational::zero() }
    }

    pub fn from_int(q: u32, n: i64) -> Coeff {
        Coeff { q, rat: big(n), surd: BigRational::zero() }
    }

    pub fn from_rational(q: u32, rat: BigRational) -> Coeff {
        Coeff { q, rat, surd: BigRational::zero() }
    }

    pub fn from_parts(q: u32, rat: BigRational, surd: BigRational) -> Coeff {
        Coeff::fold(Coeff { q, rat, surd })
    }

    /// `v^n` where `v = sqrt(q)`, for any integer `n`.
    pub fn v_pow(q: u32, n: i64) -> Coeff {
        if n % 2 == 0 {
            Coeff { q, rat: q_pow(q, n / 2), surd: BigRational::zero() }
        } else {
            // v^n = q^((n-1)/2) * sqrt(q); for negative odd n the rational
            // exponent (n-1)/2 rounds toward -infinity, which is what
            // dividing after subtracting one achieves for odd n.
            let e = (n - 1).div_euclid(2);
            Coeff::fold(Coeff { q, rat: BigRational::zero(), surd: q_pow(q, e) })
        }
    }

    /// Integer square root of `q` if `q` is a perfect square.
    fn sqrt_exact(q: u32) -> Option<u32> {
        let r = (q as f64).sqrt().round() as u32;
        (r * r == q).then_some(r)
    }

    /// Canonicalize: over a perfect-square `q` the surd part is rational
    /// and gets absorbed.  Every constructor that can introduce a surd part
    /// goes through here, so arithmetic preserves the invariant for free.
    fn fold(mut x: Coeff) -> Coeff {
        if !x.surd.is_zero() {
            if let Some(r) = Coeff::sqrt_exact(x.q) {
                x.rat += &x.surd * big(r as i64);
                x.surd = BigRational::zero();
            }
        }
        x
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.surd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.surd.is_zero()
    }

    /// True if the element lies in `Q` (no surd component).
    pub fn is_rational(&self) -> bool {
        self.surd.is_zero()
    }

    fn check(&self, other: &Coeff) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.q, other.q))
        }
    }

    pub fn try_add(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        Ok(Coeff { q: self.q, rat: &self.rat + &other.rat, surd: &self.surd + &other.surd })
    }

    pub fn try_sub(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        Ok(Coeff { q: self.q, rat: &self.rat - &other.rat, surd: &self.surd - &other.surd })
    }

    pub fn try_mul(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        // (a + b s)(c + d s) = (ac + bd q) + (ad + bc) s with s^2 = q.
        let qr = BigRational::from_integer(BigInt::from(self.q));
        let rat = &self.rat * &other.rat + &self.surd * &other.surd * &qr;
        let surd = &self.rat * &other.surd + &self.surd * &other.rat;
        Ok(Coeff { q: self.q, rat, surd })
    }

    /// Multiplicative inverse via the conjugate; `None` for zero.
    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        let qr = BigRational::from_integer(BigInt::from(self.q));
        // Norm (a + b s)(a - b s) = a^2 - b^2 q, nonzero since sqrt(q) is
        // irrational and the element is nonzero.
        let norm = &self.rat * &self.rat - &self.surd * &self.surd * &qr;
        debug_assert!(!norm.is_zero());
        Some(Coeff { q: self.q, rat: &self.rat / &norm, surd: -&self.surd / &norm })
    }

    pub fn try_div(&self, other: &Coeff) -> Result<Coeff> {
        self.check(other)?;
        let inv = other
            .inv()
            .ok_or_else(|| Error::Internal("division by zero coefficient".into()))?;
        self.try_mul(&inv)
    }

    /// Scale by an exact rational.
    pub fn scale(&self, r: &BigRational) -> Coeff {
        Coeff { q: self.q, rat: &self.rat * r, surd: &self.surd * r }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "rat": self.rat.to_string(), "surd": self.surd.to_string() })
    }

    pub fn from_json(q: u32, value: &serde_json::Value) -> Result<Coeff> {
        let repr: CoeffRepr = serde_json::from_value(value.clone())
            .map_err(|e| Error::Config(format!("bad coefficient: {e}")))?;
        let parse = |s: &str| -> Result<BigRational> {
            s.parse::<BigRational>()
                .map_err(|e| Error::Config(format!("bad rational {s:?}: {e}")))
        };
        Ok(Coeff::from_parts(q, parse(&repr.rat)?, parse(&repr.surd)?))
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}*r{}", self.surd, self.q);
        }
        if self.surd.is_negative() {
            write!(f, "{} - {}*r{}", self.rat, -&self.surd, self.q)
        } else {
            write!(f, "{} + {}*r{}", self.rat, self.surd, self.q)
        }
    }
}

macro_rules! coeff_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for &Coeff {
            type Output = Coeff;
            fn $method(self, rhs: &Coeff) -> Coeff {
                self.$try(rhs).expect("coefficient context mismatch")
            }
        }
        impl $trait for Coeff {
            type Output = Coeff;
            fn $method(self, rhs: Coeff) -> Coeff {
                (&self).$method(&rhs)
            }
        }
    };
}

coeff_binop!(Add, add, try_add);
coeff_binop!(Sub, sub, try_sub);
coeff_binop!(Mul, mul, try_mul);
coeff_binop!(Div, div, try_div);

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { q: self.q, rat: -&self.rat, surd: -&self.surd }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_powers() {
        // v^2 = q, v^3 = q * sqrt(q), v^0 = 1, v^-2 = 1/q, v^-1 = sqrt(q)/q.
        let q = 2;
        assert_eq!(Coeff::v_pow(q, 0), Coeff::one(q));
        assert_eq!(Coeff::v_pow(q, 2), Coeff::from_int(q, 2));
        let v3 = Coeff::v_pow(q, 3);
        assert!(v3.rat_part().is_zero());
        assert_eq!(*v3.surd_part(), big(2));
        let vm1 = Coeff::v_pow(q, -1);
        assert_eq!(*vm1.surd_part(), BigRational::new(BigInt::from(1), BigInt::from(2)));
        // v^m * v^n = v^(m+n) across parities and signs.
        for m in -5..=5i64 {
            for n in -5..=5i64 {
                let lhs = &Coeff::v_pow(q, m) * &Coeff::v_pow(q, n);
                assert_eq!(lhs, Coeff::v_pow(q, m + n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for q in [2u32, 3, 5, 7] {
            let x = Coeff::from_parts(q, big(3) / big(4), big(-7) / big(5));
            let inv = x.inv().unwrap();
            assert_eq!(&x * &inv, Coeff::one(q));
            // v is invertible with v * v^-1 = 1.
            let v = Coeff::v_pow(q, 1);
            assert_eq!(v.inv().unwrap(), Coeff::v_pow(q, -1));
        }
        assert!(Coeff::zero(2).inv().is_none());
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Coeff::one(2);
        let b = Coeff::one(3);
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn perfect_square_context_folds() {
        // With q = 4 the surd is rational: 1*sqrt(4) = 2.
        let x = Coeff::from_parts(4, BigRational::zero(), big(1));
        assert_eq!(x, Coeff::from_int(4, 2));
        assert!(x.is_rational());
        assert_eq!(Coeff::v_pow(4, 1), Coeff::from_int(4, 2));
        assert_eq!(Coeff::v_pow(4, -1), Coeff::from_parts(4, big(1) / big(2), big(0)));
    }

    #[test]
    fn json_roundtrip() {
        let x = Coeff::from_parts(3, big(-5) / big(2), big(7) / big(3));
        let j = x.to_json();
        assert_eq!(j["rat"], "-5/2");
        assert_eq!(j["surd"], "7/3");
        assert_eq!(Coeff::from_json(3, &j).unwrap(), x);
    }
}
