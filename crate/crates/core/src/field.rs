//! Exact arithmetic in `Q(√3, √d)` for a squarefree rotation tag `d`.
//!
//! Every coordinate in the crate is a [`FieldElement`] `a + b√3 + c√d + e√(3d)` with
//! arbitrary-precision rational coefficients. The lattice irrationality `√3` is always
//! present; `√d` comes from at most one rotation per graph. The tag is canonicalized so
//! that `d` is never divisible by 3 (a factor of 3 is folded into the `√3` slot), and
//! `d = 1` means "no rotation", in which case `c = e = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("mismatched rotation tags: √{0} vs √{1}")]
    MismatchedTag(u64, u64),
    #[error("invalid rotation tag {0}: must be squarefree, not divisible by 3")]
    InvalidTag(u64),
    #[error("squared distance is negative: {0}")]
    NegativeSquare(String),
    #[error("degenerate rotation: zero discriminant")]
    ZeroDiscriminant,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("value does not fit in 64 bits")]
    Overflow,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, FieldError> {
    let err = || FieldError::ParseRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(t).map_err(|_| err())?)),
    }
}

/// Splits `delta` as `f² · d` with `d` squarefree, by trial division.
///
/// Trial division runs up to the square root of the remaining cofactor, which is
/// comfortable for discriminants up to ~10¹⁴.
pub fn squarefree_decompose(delta: u64) -> Result<(u64, u64), FieldError> {
    if delta == 0 {
        return Err(FieldError::ZeroDiscriminant);
    }
    let mut rest = delta;
    let mut f = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut exp = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            exp += 1;
        }
        f *= p.pow(exp / 2);
        if exp % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    d *= rest;
    Ok((f, d))
}

fn is_squarefree(d: u64) -> bool {
    matches!(squarefree_decompose(d), Ok((1, _)))
}

/// Sign of `p + q√3`.
fn sign_q3(p: &Rational, q: &Rational) -> i32 {
    let sp = signum(p);
    let sq = signum(q);
    if sq == 0 || sp == sq {
        return sp;
    }
    if sp == 0 {
        return sq;
    }
    let diff = p * p - q * q * rat(3);
    sp * signum(&diff)
}

fn signum(r: &Rational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// `a + b√3 + c√d + e√(3d)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    a: Rational,
    b: Rational,
    c: Rational,
    e: Rational,
    d: u64,
}

impl FieldElement {
    /// Builds an element; `d` must be 1 or squarefree and coprime to 3.
    pub fn new(a: Rational, b: Rational, c: Rational, e: Rational, d: u64) -> Result<Self, FieldError> {
        if d == 0 || (d != 1 && (d.is_multiple_of(3) || !is_squarefree(d))) {
            return Err(FieldError::InvalidTag(d));
        }
        if d == 1 && !(c.is_zero() && e.is_zero()) {
            // √1 collapses into the rational and √3 slots
            return Ok(Self::normalized(a + c, b + e, Rational::zero(), Rational::zero(), 1));
        }
        Ok(Self::normalized(a, b, c, e, d))
    }

    fn normalized(a: Rational, b: Rational, c: Rational, e: Rational, d: u64) -> Self {
        let d = if c.is_zero() && e.is_zero() { 1 } else { d };
        FieldElement { a, b, c, e, d }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(a: Rational) -> Self {
        FieldElement { a, b: Rational::zero(), c: Rational::zero(), e: Rational::zero(), d: 1 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// `q·√3`.
    pub fn sqrt3_times(q: Rational) -> Self {
        Self::normalized(Rational::zero(), q, Rational::zero(), Rational::zero(), 1)
    }

    /// `√k` for a positive integer `k`, placed in the canonical basis slot.
    pub fn sqrt_int(k: u64) -> Result<Self, FieldError> {
        let (f, q) = squarefree_decompose(k)?;
        let f = Rational::from_integer(BigInt::from(f));
        let z = Rational::zero();
        Ok(match (q, q % 3 == 0) {
            (1, _) => Self::from_rational(f),
            (3, _) => Self::sqrt3_times(f),
            (_, true) => Self::normalized(z.clone(), z.clone(), z, f, q / 3),
            (_, false) => Self::normalized(z.clone(), z.clone(), f, z, q),
        })
    }

    pub fn coeffs(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.e]
    }

    pub fn from_coeffs(coeffs: [Rational; 4], d: u64) -> Result<Self, FieldError> {
        let [a, b, c, e] = coeffs;
        Self::new(a, b, c, e, d)
    }

    /// The rotation tag; 1 when the `√d` and `√(3d)` parts vanish.
    pub fn tag(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.e.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.e.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// The part free of `√d`: `a + b√3`.
    pub fn tag_free_part(&self) -> Self {
        Self::normalized(self.a.clone(), self.b.clone(), Rational::zero(), Rational::zero(), 1)
    }

    /// The part carrying `√d`: `c√d + e√(3d)`.
    pub fn tagged_part(&self) -> Self {
        Self::normalized(Rational::zero(), Rational::zero(), self.c.clone(), self.e.clone(), self.d)
    }

    fn join_tag(&self, other: &Self) -> Result<u64, FieldError> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(FieldError::MismatchedTag(x, y)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.join_tag(other)?;
        Ok(Self::normalized(
            &self.a + &other.a,
            &self.b + &other.b,
            &self.c + &other.c,
            &self.e + &other.e,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.join_tag(other)?;
        Ok(Self::normalized(
            &self.a - &other.a,
            &self.b - &other.b,
            &self.c - &other.c,
            &self.e - &other.e,
            d,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.join_tag(other)?;
        let (x, y) = (self, other);
        let three = rat(3);
        let dd = Rational::from_integer(BigInt::from(d));
        let d3 = &dd * &three;
        // basis products: √3√3 = 3, √d√d = d, √3√d = √(3d), √3·√(3d) = 3√d,
        // √d·√(3d) = d√3, √(3d)√(3d) = 3d
        let a = &x.a * &y.a + &x.b * &y.b * &three + &x.c * &y.c * &dd + &x.e * &y.e * &d3;
        let b = &x.a * &y.b + &x.b * &y.a + (&x.c * &y.e + &x.e * &y.c) * &dd;
        let c = &x.a * &y.c + &x.c * &y.a + (&x.b * &y.e + &x.e * &y.b) * &three;
        let e = &x.a * &y.e + &x.e * &y.a + &x.b * &y.c + &x.c * &y.b;
        Ok(Self::normalized(a, b, c, e, d))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::normalized(&self.a * q, &self.b * q, &self.c * q, &self.e * q, self.d)
    }

    /// Multiplicative inverse via the two conjugations `√3 → −√3` and `√d → −√d`.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let d = self.d;
        // conjugate over √d: (A + B√d)(A − B√d) = A² − dB² ∈ Q(√3)
        let conj_d = Self::normalized(self.a.clone(), self.b.clone(), -&self.c, -&self.e, d);
        let norm_d = self.checked_mul(&conj_d)?;
        // conjugate over √3: (p + q√3)(p − q√3) = p² − 3q² ∈ Q
        let conj_3 = Self::normalized(norm_d.a.clone(), -&norm_d.b, Rational::zero(), Rational::zero(), 1);
        let norm = norm_d.checked_mul(&conj_3)?;
        let n = norm.as_rational().ok_or(FieldError::DivisionByZero)?.clone();
        Ok(conj_d.checked_mul(&conj_3)?.scale(&n.recip()))
    }

    /// Exact sign of the real value.
    pub fn sign(&self) -> i32 {
        // value = A + B√d with A = a + b√3, B = c + e√3
        let sa = sign_q3(&self.a, &self.b);
        let sb = sign_q3(&self.c, &self.e);
        if sb == 0 || sa == sb {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        let dd = Rational::from_integer(BigInt::from(self.d));
        let three = rat(3);
        // A² − d·B² = p + q√3
        let p = &self.a * &self.a + &self.b * &self.b * &three
            - (&self.c * &self.c + &self.e * &self.e * &three) * &dd;
        let q = (&self.a * &self.b - &self.c * &self.e * &dd) * rat(2);
        sa * sign_q3(&p, &q)
    }

    /// Compares the real values, as opposed to the structural `Ord`.
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering, FieldError> {
        Ok(self.checked_sub(other)?.sign().cmp(&0))
    }

    /// Returns `s` when `self` equals `s²` for an odd positive integer `s`.
    pub fn as_odd_square(&self) -> Result<Option<u64>, FieldError> {
        if self.is_rational() && self.a.is_negative() {
            return Err(FieldError::NegativeSquare(format_rational(&self.a)));
        }
        Ok(self.as_rational().and_then(odd_root))
    }

    /// Floating-point approximation, for prefilters and rendering only.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        let s3 = 3f64.sqrt();
        let sd = (self.d as f64).sqrt();
        f(&self.a) + f(&self.b) * s3 + f(&self.c) * sd + f(&self.e) * s3 * sd
    }
}

fn odd_root(r: &Rational) -> Option<u64> {
    if !r.is_integer() || !r.is_positive() {
        return None;
    }
    let n = r.numer();
    let s = n.sqrt();
    if &(&s * &s) != n || num_integer::Integer::is_even(&s) {
        return None;
    }
    s.to_u64()
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d;
        let basis = ["1".to_string(), "√3".to_string(), format!("√{d}"), format!("√{}", 3 * d)];
        let mut terms = Vec::new();
        for (coef, base) in self.coeffs().into_iter().zip(basis.iter()) {
            if coef.is_zero() {
                continue;
            }
            let c = format_rational(coef);
            terms.push(if base == "1" { c } else { format!("{c}·{base}") });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

// Operator forms panic on mismatched tags; graph-level code checks tags once up front
// and then uses these. Use the `checked_*` methods at trust boundaries.
impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field tag mismatch in addition")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field tag mismatch in subtraction")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field tag mismatch in multiplication")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::normalized(-&self.a, -&self.b, -&self.c, -&self.e, self.d)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
