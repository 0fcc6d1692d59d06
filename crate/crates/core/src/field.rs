//! Ordered-field scalars: exact elements of Q(sqrt d) and a tolerance-aware float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CopeError, Result};

pub const DEFAULT_RADICAND: u32 = 5;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Absolute tolerance used by every sign test of the float backend.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

pub fn set_tolerance(tol: f64) {
    assert!(tol >= 0.0 && tol.is_finite(), "tolerance must be a finite nonnegative number");
    TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

/// Operations every backend provides. Arithmetic never rounds in exact mode.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn from_quadratic(q: &QuadraticScalar) -> Self;
    /// -1, 0 or +1. The float backend treats |x| <= tolerance as zero.
    fn signum(&self) -> i8;
    fn to_f64(&self) -> f64;
    /// Size of the exact representation in bits (0 for floats).
    fn bit_size(&self) -> u64;
    fn is_exact() -> bool;
    fn backend_name() -> &'static str;
    /// Exact value, when this backend can produce one.
    fn to_quadratic(&self) -> Option<QuadraticScalar>;
    /// Lossy construction from a double; exact backends refuse.
    fn from_f64_lossy(v: f64) -> Option<Self>;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
    fn is_positive(&self) -> bool {
        self.signum() > 0
    }
    fn is_negative(&self) -> bool {
        self.signum() < 0
    }
    fn cmp_to(&self, other: &Self) -> Ordering {
        match (self.clone() - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self.cmp_to(other) == Ordering::Equal
    }
    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(CopeError::DivisionByZero);
        }
        Ok(self.clone() / other)
    }
    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_bits(q: &BigRational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact a + b*sqrt(d). `radicand` is 0 exactly when b is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticScalar {
    rat: BigRational,
    irr: BigRational,
    radicand: u32,
}

fn is_square_free(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2u32;
    while p.saturating_mul(p) <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

impl QuadraticScalar {
    pub fn new(rat: BigRational, irr: BigRational, radicand: u32) -> Result<Self> {
        if !irr.is_zero() && !is_square_free(radicand) {
            return Err(CopeError::Parse {
                column: 0,
                message: format!("radicand {radicand} is not a square-free integer > 1"),
            });
        }
        Ok(Self::raw(rat, irr, radicand))
    }

    fn raw(rat: BigRational, irr: BigRational, radicand: u32) -> Self {
        let radicand = if irr.is_zero() { 0 } else { radicand };
        QuadraticScalar { rat, irr, radicand }
    }

    pub fn from_ratio(q: BigRational) -> Self {
        Self::raw(q, BigRational::zero(), 0)
    }

    pub fn int(v: i64) -> Self {
        Self::from_ratio(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_ratio(rat(n, d))
    }

    /// sqrt(d) itself.
    pub fn sqrt_radicand(d: u32) -> Self {
        Self::raw(BigRational::zero(), BigRational::one(), d)
    }

    /// a + b*sqrt(d) from small integers/fractions, handy in tests.
    pub fn with_parts(a: BigRational, b: BigRational, d: u32) -> Self {
        Self::raw(a, b, d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }
    pub fn irrational_part(&self) -> &BigRational {
        &self.irr
    }
    /// The radicand, or None for plain rationals.
    pub fn radicand(&self) -> Option<u32> {
        if self.radicand == 0 {
            None
        } else {
            Some(self.radicand)
        }
    }
    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> u32 {
        match (self.radicand, other.radicand) {
            (0, d) | (d, 0) => d,
            (a, b) if a == b => a,
            (a, b) => panic!("mixed radicands sqrt({a}) and sqrt({b}) in one computation"),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self::raw(self.rat.clone(), -self.irr.clone(), self.radicand)
    }

    /// a^2 - d b^2
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        &self.rat * &self.rat - &self.irr * &self.irr * d
    }

    pub fn sign(&self) -> i8 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.irr);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let n = self.norm();
        match sign_of(&n) {
            1 => sa,
            -1 => sb,
            _ => 0,
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.rat.is_zero() && self.irr.is_zero() {
            return Err(CopeError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::raw(&self.rat / &n, -(&self.irr / &n), self.radicand))
    }

    /// Rational q with |q - x| < 2^-bits, via an integer square root of d * 4^k.
    pub fn approx(&self, bits: u32) -> BigRational {
        if self.irr.is_zero() {
            return self.rat.clone();
        }
        let b_abs = self.irr.abs();
        let mag = b_abs.numer().bits() as i64 - b_abs.denom().bits() as i64 + 1;
        let k = (bits as i64 + mag.max(0) + 2) as u32;
        let scale = BigInt::one() << (2 * k as usize);
        let root = (BigInt::from(self.radicand) * scale).sqrt();
        let sqrt_d = BigRational::new(root, BigInt::one() << k as usize);
        &self.rat + &self.irr * sqrt_d
    }

    /// Exact square root inside Q(sqrt d) when one exists, returning the nonnegative root.
    pub fn sqrt_exact(&self) -> Option<Self> {
        match self.sign() {
            -1 => return None,
            0 => return Some(Self::int(0)),
            _ => {}
        }
        if self.irr.is_zero() {
            if let Some(r) = rational_sqrt(&self.rat) {
                return Some(Self::from_ratio(r));
            }
            // a = y^2 d for some d in use: only decidable if a radicand is known elsewhere
            return None;
        }
        // x^2 + d y^2 = a, 2xy = b
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for cand in [(&self.rat + &disc) / &two, (&self.rat - &disc) / &two] {
            if cand.is_positive() {
                if let Some(x) = rational_sqrt(&cand) {
                    let y = &self.irr / (&two * &x);
                    let root = Self::raw(x, y, self.radicand);
                    let root = if root.sign() < 0 { -root } else { root };
                    if root.clone() * root.clone() == *self {
                        return Some(root);
                    }
                }
            }
        }
        None
    }

    /// sqrt(q * d) for rational q, i.e. roots of the form y*sqrt(d).
    pub fn sqrt_exact_in(&self, radicand: u32) -> Option<Self> {
        if let Some(r) = self.sqrt_exact() {
            return Some(r);
        }
        if !self.irr.is_zero() || self.rat.is_negative() {
            return None;
        }
        let d = BigRational::from_integer(BigInt::from(radicand));
        let y = rational_sqrt(&(&self.rat / d))?;
        Some(Self::raw(BigRational::zero(), y, radicand))
    }

    pub fn parse(text: &str, radicand: u32) -> Result<Self> {
        parse_scalar(text, radicand)
    }
}

fn sign_of(q: &BigRational) -> i8 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(int_sqrt_exact(q.numer())?, int_sqrt_exact(q.denom())?))
}

impl fmt::Display for QuadraticScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", format_rational(&self.rat))
        } else {
            write!(
                f,
                "({})+({})*sqrt({})",
                format_rational(&self.rat),
                format_rational(&self.irr),
                self.radicand
            )
        }
    }
}

impl Add for QuadraticScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self + &o
    }
}
impl<'a> Add<&'a QuadraticScalar> for QuadraticScalar {
    type Output = Self;
    fn add(self, o: &Self) -> Self {
        let d = self.common_radicand(o);
        Self::raw(self.rat + &o.rat, self.irr + &o.irr, d)
    }
}
impl Sub for QuadraticScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self - &o
    }
}
impl<'a> Sub<&'a QuadraticScalar> for QuadraticScalar {
    type Output = Self;
    fn sub(self, o: &Self) -> Self {
        let d = self.common_radicand(o);
        Self::raw(self.rat - &o.rat, self.irr - &o.irr, d)
    }
}
impl Mul for QuadraticScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self * &o
    }
}
impl<'a> Mul<&'a QuadraticScalar> for QuadraticScalar {
    type Output = Self;
    fn mul(self, o: &Self) -> Self {
        let d = self.common_radicand(o);
        if self.irr.is_zero() && o.irr.is_zero() {
            return Self::from_ratio(self.rat * &o.rat);
        }
        let dd = BigRational::from_integer(BigInt::from(d));
        let rat = &self.rat * &o.rat + &self.irr * &o.irr * dd;
        let irr = &self.rat * &o.irr + &self.irr * &o.rat;
        Self::raw(rat, irr, d)
    }
}
impl Div for QuadraticScalar {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self / &o
    }
}
impl<'a> Div<&'a QuadraticScalar> for QuadraticScalar {
    type Output = Self;
    fn div(self, o: &Self) -> Self {
        if o.irr.is_zero() {
            assert!(!o.rat.is_zero(), "division by zero");
            return Self::raw(self.rat / &o.rat, self.irr / &o.rat, self.radicand);
        }
        self * &o.recip().expect("division by zero")
    }
}
impl Neg for QuadraticScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::raw(-self.rat, -self.irr, self.radicand)
    }
}

impl Scalar for QuadraticScalar {
    fn zero() -> Self {
        Self::int(0)
    }
    fn one() -> Self {
        Self::int(1)
    }
    fn from_int(v: i64) -> Self {
        Self::int(v)
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::from_ratio(q.clone())
    }
    fn from_quadratic(q: &QuadraticScalar) -> Self {
        q.clone()
    }
    fn signum(&self) -> i8 {
        self.sign()
    }
    fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.irr.is_zero() {
            return a;
        }
        let b = self.irr.to_f64().unwrap_or(f64::NAN);
        let v = a + b * (self.radicand as f64).sqrt();
        // cancellation guard: fall back to a 64-bit accurate rational approximation
        if v.abs() < 1e-6 * (a.abs() + b.abs()) {
            return self.approx(128).to_f64().unwrap_or(v);
        }
        v
    }
    fn bit_size(&self) -> u64 {
        rat_bits(&self.rat).max(rat_bits(&self.irr))
    }
    fn is_exact() -> bool {
        true
    }
    fn backend_name() -> &'static str {
        "exact"
    }
    fn to_quadratic(&self) -> Option<QuadraticScalar> {
        Some(self.clone())
    }
    fn from_f64_lossy(_: f64) -> Option<Self> {
        None
    }
    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }
}

/// Power-of-two rounding direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// Exponent z of the power of two bracketing x: 2^z <= x < 2^(z+1) (Down) or 2^(z-1) < x <= 2^z (Up).
pub fn round_pow2_exponent<T: Scalar>(x: &T, direction: Round) -> Result<i64> {
    if !x.is_positive() {
        return Err(CopeError::Domain(format!("round_pow2 needs a positive argument, got {x}")));
    }
    let mut z = estimate_log2(x);
    let pow = |z: i64| T::from_rational(&pow2(z));
    // normalize to 2^z <= x < 2^(z+1)
    while x.cmp_to(&pow(z)) == Ordering::Less {
        z -= 1;
    }
    while x.cmp_to(&pow(z + 1)) != Ordering::Less {
        z += 1;
    }
    Ok(match direction {
        Round::Down => z,
        Round::Up => {
            if x.cmp_to(&pow(z)) == Ordering::Equal {
                z
            } else {
                z + 1
            }
        }
    })
}

pub fn round_pow2<T: Scalar>(x: &T, direction: Round) -> Result<BigRational> {
    Ok(pow2(round_pow2_exponent(x, direction)?))
}

pub fn pow2(z: i64) -> BigRational {
    if z >= 0 {
        BigRational::from_integer(BigInt::one() << z as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-z) as usize)
    }
}

fn estimate_log2<T: Scalar>(x: &T) -> i64 {
    let v = x.to_f64();
    if v.is_finite() && v > 0.0 {
        let e = v.log2().floor();
        if e.abs() < 1000.0 {
            return e as i64;
        }
    }
    if let Some(q) = x.to_quadratic() {
        let mut bits = 64u32;
        loop {
            let a = q.approx(bits);
            if a.is_positive() && a > pow2(-(bits as i64) + 2) {
                return a.numer().bits() as i64 - a.denom().bits() as i64;
            }
            bits *= 2;
        }
    }
    0
}

/// Float backend: f64 with the global absolute tolerance applied to every sign test.
#[derive(Clone, Copy, Debug, Default)]
pub struct Float(pub f64);

impl Float {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= tolerance()
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! float_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Float {
            type Output = Float;
            fn $m(self, o: Float) -> Float {
                Float(self.0 $op o.0)
            }
        }
        impl<'a> $tr<&'a Float> for Float {
            type Output = Float;
            fn $m(self, o: &Float) -> Float {
                Float(self.0 $op o.0)
            }
        }
    };
}
float_op!(Add, add, +);
float_op!(Sub, sub, -);
float_op!(Mul, mul, *);
float_op!(Div, div, /);

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}

impl Scalar for Float {
    fn zero() -> Self {
        Float(0.0)
    }
    fn one() -> Self {
        Float(1.0)
    }
    fn from_int(v: i64) -> Self {
        Float(v as f64)
    }
    fn from_rational(q: &BigRational) -> Self {
        Float(q.to_f64().unwrap_or(f64::NAN))
    }
    fn from_quadratic(q: &QuadraticScalar) -> Self {
        Float(q.to_f64())
    }
    fn signum(&self) -> i8 {
        let t = tolerance();
        if self.0 > t {
            1
        } else if self.0 < -t {
            -1
        } else {
            0
        }
    }
    fn to_f64(&self) -> f64 {
        self.0
    }
    fn bit_size(&self) -> u64 {
        0
    }
    fn is_exact() -> bool {
        false
    }
    fn backend_name() -> &'static str {
        "float"
    }
    fn to_quadratic(&self) -> Option<QuadraticScalar> {
        None
    }
    fn from_f64_lossy(v: f64) -> Option<Self> {
        Some(Float(v))
    }
    fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.0 == 0.0 {
            return Err(CopeError::DivisionByZero);
        }
        Ok(Float(self.0 / other.0))
    }
}

// ---- text grammar -------------------------------------------------------

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Cursor { chars, pos: 0, src }
    }
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }
    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.src.chars().count() + 1)
    }
    fn err(&self, message: impl Into<String>) -> CopeError {
        CopeError::Parse { column: self.column(), message: message.into() }
    }
    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}' in {:?}", self.src)))
        }
    }
    fn eat_str(&mut self, s: &str) -> Result<()> {
        for c in s.chars() {
            self.expect(c)?;
        }
        Ok(())
    }
    fn integer(&mut self) -> Result<BigInt> {
        let mut text = String::new();
        if let Some(c @ ('-' | '+')) = self.peek() {
            text.push(c);
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            text.push(c);
            self.pos += 1;
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(self.err(format!("expected an integer in {:?}", self.src)));
        }
        text.parse::<BigInt>().map_err(|e| self.err(e.to_string()))
    }
    fn rational(&mut self) -> Result<BigRational> {
        let n = self.integer()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let d = self.integer()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }
}

fn parse_scalar(text: &str, radicand: u32) -> Result<QuadraticScalar> {
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return Err(cur.err("empty scalar"));
    }
    let value = if cur.peek() == Some('(') {
        cur.expect('(')?;
        let a = cur.rational()?;
        cur.expect(')')?;
        cur.eat_str("+(")?;
        let b = cur.rational()?;
        cur.expect(')')?;
        cur.eat_str("*sqrt(")?;
        let d_col = cur.column();
        let d = cur.integer()?;
        cur.expect(')')?;
        let d = d.to_u32().ok_or_else(|| CopeError::Parse { column: d_col, message: "bad radicand".into() })?;
        if d != radicand && !b.is_zero() {
            return Err(CopeError::Parse {
                column: d_col,
                message: format!("radicand {d} does not match the declared radicand {radicand}"),
            });
        }
        QuadraticScalar::new(a, b, d)?
    } else {
        QuadraticScalar::from_ratio(cur.rational()?)
    };
    if cur.peek().is_some() {
        return Err(cur.err(format!("trailing characters in {text:?}")));
    }
    Ok(value)
}

/// Parse a plain decimal (CSV float input) or any grammar scalar into a float.
pub fn parse_float(text: &str) -> Result<Float> {
    if let Ok(v) = text.trim().parse::<f64>() {
        return Ok(Float(v));
    }
    let q = parse_scalar(text, DEFAULT_RADICAND)?;
    Ok(Float(q.to_f64()))
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadraticScalar {
        QuadraticScalar::parse(s, 5).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(q("(1)+(1)*sqrt(5)") * q("(1)+(-1)*sqrt(5)"), q("-4"));
        assert_eq!(q("(3)+(-1)*sqrt(5)") / q("(3)+(-1)*sqrt(5)"), q("1"));
        assert_eq!(q("(-1/10)+(1/10)*sqrt(5)") * q("10"), q("(-1)+(1)*sqrt(5)"));
    }

    #[test]
    fn signs() {
        assert_eq!(q("(3)+(-1)*sqrt(5)").sign(), 1);
        assert_eq!(q("(2)+(-1)*sqrt(5)").sign(), -1);
        assert_eq!(q("(0)+(0)*sqrt(5)").sign(), 0);
        assert_eq!(q("(-3)+(1)*sqrt(5)").sign(), -1);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(q("1").checked_div(&q("0")), Err(CopeError::DivisionByZero)));
    }

    #[test]
    fn approximations() {
        let s5 = q("(0)+(1)*sqrt(5)");
        let a = s5.approx(20).to_f64().unwrap();
        assert!((a - 5f64.sqrt()).abs() < 2f64.powi(-20));
        assert_eq!(q("7/3").approx(3), rat(7, 3));
        let g = q("(-1/2)+(1/2)*sqrt(5)").approx(10).to_f64().unwrap();
        assert!((g - 0.618034).abs() < 2f64.powi(-10));
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(round_pow2(&q("(3)+(-1)*sqrt(5)"), Round::Down).unwrap(), rat(1, 2));
        assert_eq!(round_pow2(&q("1"), Round::Down).unwrap(), rat(1, 1));
        assert_eq!(round_pow2(&q("1"), Round::Up).unwrap(), rat(1, 1));
        assert_eq!(round_pow2(&q("(0)+(1)*sqrt(5)"), Round::Up).unwrap(), rat(4, 1));
        assert_eq!(round_pow2(&q("3/1024"), Round::Down).unwrap(), rat(1, 512));
        assert!(round_pow2(&q("0"), Round::Down).is_err());
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["3/10", "(-1/10)+(1/10)*sqrt(5)", "-7", "0"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q(" ( 1 / 2 ) + ( 3 ) * sqrt( 5 ) ").to_string(), "(1/2)+(3)*sqrt(5)");
        assert!(QuadraticScalar::parse("(1)+(1)*sqrt(3)", 5).is_err());
        assert!(QuadraticScalar::parse("1/0", 5).is_err());
        assert!(QuadraticScalar::parse("1x", 5).is_err());
        // rational-only entries are independent of the radicand
        assert_eq!(q("(2)+(0)*sqrt(5)"), q("2"));
    }

    #[test]
    fn exact_square_roots() {
        let s = q("(5)+(-2)*sqrt(5)");
        assert_eq!(s.sqrt_exact(), None);
        let prod = q("(15/8)+(-5/8)*sqrt(5)");
        assert_eq!(prod.sqrt_exact(), Some(q("(5/4)+(-1/4)*sqrt(5)")));
        assert_eq!(q("9/4").sqrt_exact(), Some(q("3/2")));
        assert_eq!(q("5").sqrt_exact_in(5), Some(q("(0)+(1)*sqrt(5)")));
        let sq = s.clone() * s.clone();
        assert_eq!(sq.sqrt_exact(), Some(s));
    }

    #[test]
    fn float_tolerance_sign() {
        assert_eq!(Float(1e-12).signum(), 0);
        assert_eq!(Float(-1e-3).signum(), -1);
    }
}
