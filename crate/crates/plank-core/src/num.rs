//! Scalar arithmetic backends.
//!
//! Geometry code is generic over [`Scalar`]. Two backends are provided:
//! `f64` with fixed comparison tolerances, and [`Quad`], exact arithmetic
//! in the real quadratic field Q(sqrt 3). The field extension makes
//! equilateral-triangle scenes exactly representable, so touching
//! configurations are decided, not approximated.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Wire form of a scalar. Float backends serialize as plain numbers,
/// exact backends as strings like `"-5/12"` or `"1/2+1/6*sqrt3"`.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarRepr {
    Num(f64),
    Sym(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal: {literal}")]
pub struct ScalarParseError {
    pub literal: String,
}

/// An ordered field with enough structure for the geometry kernel.
///
/// `PartialOrd` must be a total order on the values the backend produces;
/// float backends are expected to keep NaN out of circulation.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic and comparisons are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// The square root of three as a field element (exact for `Quad`).
    fn sqrt3() -> Self;
    /// Nonnegative square root. Exact backends return the exact root when
    /// it lies in the field and otherwise a close rational approximation;
    /// callers must not rely on `sqrt(x) * sqrt(x) == x` there.
    fn sqrt(&self) -> Self;
    /// Default comparison tolerance (zero for exact backends).
    fn default_tol() -> Self;
    /// Default residual-classification tolerance (zero for exact backends).
    fn default_conv_tol() -> Self;
    fn repr(&self) -> ScalarRepr;
    fn parse_repr(r: &ScalarRepr) -> Result<Self, ScalarParseError>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

pub fn smin<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

pub fn smax<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> f64 {
        0.0
    }

    fn one() -> f64 {
        1.0
    }

    fn from_int(v: i64) -> f64 {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> f64 {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> f64 {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt3() -> f64 {
        3.0_f64.sqrt()
    }

    fn sqrt(&self) -> f64 {
        assert!(*self >= 0.0, "sqrt of negative value {self}");
        f64::sqrt(*self)
    }

    fn default_tol() -> f64 {
        1e-9
    }

    fn default_conv_tol() -> f64 {
        1e-7
    }

    fn repr(&self) -> ScalarRepr {
        ScalarRepr::Num(*self)
    }

    fn parse_repr(r: &ScalarRepr) -> Result<f64, ScalarParseError> {
        match r {
            ScalarRepr::Num(x) if x.is_finite() => Ok(*x),
            ScalarRepr::Num(x) => Err(ScalarParseError {
                literal: x.to_string(),
            }),
            ScalarRepr::Sym(s) => Quad::parse(s).map(|q| Scalar::to_f64(&q)),
        }
    }
}

/// An element `a + b*sqrt(3)` of Q(sqrt 3) with arbitrary-precision
/// rational coefficients. Comparisons are exact: the sign of a value with
/// mixed-sign coefficients is decided by comparing `a^2` with `3*b^2`.
#[derive(Clone, PartialEq, Eq)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational) -> Quad {
        Quad { a, b }
    }

    pub fn rational(a: BigRational) -> Quad {
        Quad {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    fn sign(&self) -> Ordering {
        let za = self.a.is_zero();
        let zb = self.b.is_zero();
        match (za, zb) {
            (true, true) => Ordering::Equal,
            (false, true) => rational_sign(&self.a),
            (true, false) => rational_sign(&self.b),
            (false, false) => {
                let sa = rational_sign(&self.a);
                let sb = rational_sign(&self.b);
                if sa == sb {
                    return sa;
                }
                // a and b pull opposite ways: a + b*sqrt3 > 0 iff the
                // positive coefficient dominates, i.e. a^2 vs 3 b^2.
                let a2 = &self.a * &self.a;
                let b23 = &self.b * &self.b * BigRational::from_integer(3.into());
                match a2.cmp(&b23) {
                    Ordering::Equal => Ordering::Equal, // impossible: sqrt3 irrational
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                }
            }
        }
    }

    /// Exact square root within the field, when one exists.
    fn exact_sqrt(&self) -> Option<Quad> {
        match self.sign() {
            Ordering::Less => return None,
            Ordering::Equal => return Some(Quad::rational(BigRational::zero())),
            Ordering::Greater => {}
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Quad::rational(r));
            }
            // a might be 3 * (rational square), giving a pure sqrt3 multiple.
            let third = &self.a / BigRational::from_integer(3.into());
            if let Some(r) = rational_sqrt(&third) {
                return Some(Quad::new(BigRational::zero(), r));
            }
            return None;
        }
        // Solve (x + y sqrt3)^2 = a + b sqrt3 with rational x, y:
        // x^2 + 3 y^2 = a and 2 x y = b force x^2 = (a ± sqrt(a^2 - 3 b^2))/2.
        let three = BigRational::from_integer(3.into());
        let d = &self.a * &self.a - &three * &self.b * &self.b;
        if d.is_negative() {
            return None;
        }
        let sd = rational_sqrt(&d)?;
        let half = BigRational::new(BigInt::one(), 2.into());
        for root in [(&self.a + &sd) * &half, (&self.a - &sd) * &half] {
            if root.is_negative() {
                continue;
            }
            if let Some(x) = rational_sqrt(&root) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&x * BigRational::from_integer(2.into()));
                let mut cand = Quad::new(x, y);
                if cand.sign() == Ordering::Less {
                    cand = -cand;
                }
                if &cand * &cand == *self {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn parse(s: &str) -> Result<Quad, ScalarParseError> {
        let err = || ScalarParseError {
            literal: s.to_string(),
        };
        let body = s.trim();
        match body.strip_suffix("*sqrt3") {
            None => {
                let a = BigRational::from_str(body).map_err(|_| err())?;
                Ok(Quad::rational(a))
            }
            Some(head) => {
                // Split "A+B" / "A-B" at the last sign that is not leading.
                let bytes = head.as_bytes();
                let split = (1..bytes.len()).rev().find(|&i| bytes[i] == b'+' || bytes[i] == b'-');
                match split {
                    Some(i) => {
                        let a = BigRational::from_str(&head[..i]).map_err(|_| err())?;
                        let b = BigRational::from_str(&head[i..]).map_err(|_| err())?;
                        Ok(Quad::new(a, b))
                    }
                    None => {
                        let b = BigRational::from_str(head).map_err(|_| err())?;
                        Ok(Quad::new(BigRational::zero(), b))
                    }
                }
            }
        }
    }
}

fn rational_sign(r: &BigRational) -> Ordering {
    if r.is_positive() {
        Ordering::Greater
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Exact rational square root of a nonnegative rational, if one exists.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(BigRational::zero());
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    if &(&sn * &sn) != num {
        return None;
    }
    let sd = den.sqrt();
    if &(&sd * &sd) != den {
        return None;
    }
    Some(BigRational::new(sn, sd))
}

impl fmt::Debug for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quad({self})")
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt3", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt3", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*sqrt3", self.a, self.b)
        }
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Quad) -> Option<Ordering> {
        Some((self.clone() - other.clone()).sign())
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        Quad::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        Quad::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        &self * &rhs
    }
}

impl Mul for &Quad {
    type Output = Quad;
    fn mul(self, rhs: &Quad) -> Quad {
        let three = BigRational::from_integer(3.into());
        Quad::new(
            &self.a * &rhs.a + three * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Div for Quad {
    type Output = Quad;
    fn div(self, rhs: Quad) -> Quad {
        // Multiply by the conjugate: the norm a^2 - 3 b^2 vanishes only at 0.
        let three = BigRational::from_integer(3.into());
        let norm = &rhs.a * &rhs.a - three * &rhs.b * &rhs.b;
        assert!(!norm.is_zero(), "division by zero");
        let conj = Quad::new(rhs.a.clone(), -&rhs.b);
        let prod = &self * &conj;
        Quad::new(prod.a / &norm, prod.b / &norm)
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.a, -self.b)
    }
}

impl Scalar for Quad {
    const EXACT: bool = true;

    fn zero() -> Quad {
        Quad::rational(BigRational::zero())
    }

    fn one() -> Quad {
        Quad::rational(BigRational::one())
    }

    fn from_int(v: i64) -> Quad {
        Quad::rational(BigRational::from_integer(v.into()))
    }

    fn from_ratio(num: i64, den: i64) -> Quad {
        assert!(den != 0, "zero denominator");
        Quad::rational(BigRational::new(num.into(), den.into()))
    }

    fn from_f64(x: f64) -> Quad {
        let r = BigRational::from_float(x).unwrap_or_else(|| panic!("non-finite input {x}"));
        Quad::rational(r)
    }

    fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3.0_f64.sqrt()
    }

    fn sqrt3() -> Quad {
        Quad::new(BigRational::zero(), BigRational::one())
    }

    fn sqrt(&self) -> Quad {
        assert!(
            self.sign() != Ordering::Less,
            "sqrt of negative value {self}"
        );
        if let Some(r) = self.exact_sqrt() {
            return r;
        }
        // No root in the field: a dyadic approximation is good enough for
        // the weight factors this feeds (signs never depend on it).
        Quad::from_f64(Scalar::to_f64(self).sqrt())
    }

    fn default_tol() -> Quad {
        Quad::zero()
    }

    fn default_conv_tol() -> Quad {
        Quad::zero()
    }

    fn repr(&self) -> ScalarRepr {
        ScalarRepr::Sym(self.to_string())
    }

    fn parse_repr(r: &ScalarRepr) -> Result<Quad, ScalarParseError> {
        match r {
            ScalarRepr::Num(x) if x.is_finite() => Ok(Quad::from_f64(*x)),
            ScalarRepr::Num(x) => Err(ScalarParseError {
                literal: x.to_string(),
            }),
            ScalarRepr::Sym(s) => Quad::parse(s),
        }
    }
}
