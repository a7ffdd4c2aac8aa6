//! Binary floating point with an explicit working precision.
//!
//! A value is `mant * 2^exp` with `|mant| < 2^prec`, rounded to nearest after
//! every operation. Binary operations run at, and report, the smaller of the
//! two operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::exactmath::Rational;

#[derive(Clone)]
pub struct PrecReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits(m: &BigInt) -> i64 {
    m.bits() as i64
}

/// `round(m / 2^shift)`, ties away from zero.
fn shift_round(m: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return m.clone();
    }
    let half = BigInt::from(1) << (shift - 1);
    let mag = (m.abs() + half) >> shift;
    if m.is_negative() {
        -mag
    } else {
        mag
    }
}

/// `x * 2^e` without intermediate overflow.
fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl PrecReal {
    fn normalized(mant: BigInt, exp: i64, prec: u32) -> Self {
        let prec = prec.max(2);
        if mant.is_zero() {
            return PrecReal { mant, exp: 0, prec };
        }
        let b = bits(&mant);
        if b <= prec as i64 {
            return PrecReal { mant, exp, prec };
        }
        let shift = (b - prec as i64) as u64;
        let m = shift_round(&mant, shift);
        // rounding may carry into one more bit
        if bits(&m) > prec as i64 {
            PrecReal {
                mant: shift_round(&m, 1),
                exp: exp + shift as i64 + 1,
                prec,
            }
        } else {
            PrecReal {
                mant: m,
                exp: exp + shift as i64,
                prec,
            }
        }
    }

    pub fn zero(prec: u32) -> Self {
        PrecReal::normalized(BigInt::zero(), 0, prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        PrecReal::normalized(BigInt::from(n), 0, prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.is_zero() {
            return PrecReal::zero(prec);
        }
        let s = prec as i64 + bits(r.denom()) - bits(r.numer()) + 2;
        let (num, den) = if s >= 0 {
            (r.numer() << s as u64, r.denom().clone())
        } else {
            (r.numer().clone(), r.denom() << (-s) as u64)
        };
        let (q, rem) = num.div_rem(&den);
        // round half away from zero on the quotient
        let twice = rem.abs() << 1u32;
        let q = if twice >= den.abs() {
            if num.is_negative() {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        };
        PrecReal::normalized(q, -s, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return PrecReal::zero(prec);
        }
        let (m, e) = {
            let b = x.abs().to_bits();
            let raw_e = ((b >> 52) & 0x7ff) as i64;
            let frac = b & ((1u64 << 52) - 1);
            if raw_e == 0 {
                (frac, -1074)
            } else {
                (frac | (1u64 << 52), raw_e - 1075)
            }
        };
        let m = if x < 0.0 { -BigInt::from(m) } else { BigInt::from(m) };
        PrecReal::normalized(m, e, prec)
    }

    /// The exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), BigInt::from(1) << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant);
        let (m, e) = if b > 60 {
            (shift_round(&self.mant, (b - 60) as u64), self.exp + b - 60)
        } else {
            (self.mant.clone(), self.exp)
        };
        ldexp(m.to_f64().unwrap_or(f64::NAN), e)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Re-rounds to `prec` bits (or relabels to a higher working precision).
    pub fn with_precision(&self, prec: u32) -> Self {
        PrecReal::normalized(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.exp + bits(&self.mant))
        }
    }

    /// Approximate `log2 |x|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = bits(&self.mant);
        let top = if b > 60 {
            (&self.mant >> (b - 60) as u64).abs().to_f64().unwrap()
        } else {
            self.mant.abs().to_f64().unwrap()
        };
        let shift = if b > 60 { b - 60 } else { 0 };
        top.log2() + (self.exp + shift) as f64
    }

    pub fn abs(&self) -> Self {
        PrecReal {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// `x * 2^e`, exact.
    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.mant.is_zero() {
            return self.clone();
        }
        PrecReal {
            mant: self.mant.clone(),
            exp: self.exp + e,
            prec: self.prec,
        }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = PrecReal::from_int(1, self.prec);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "division by zero");
        self / &PrecReal::from_int(d, self.prec.max(64))
    }

    /// Significant decimal digits supported by the precision.
    pub fn warranted_digits(&self) -> usize {
        ((self.prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
    }

    /// Scientific notation with `digits` significant digits, e.g. `-1.2345e3`.
    pub fn to_sci(&self, digits: usize) -> String {
        rational_to_sci(&self.to_rational(), digits.max(1))
    }

    /// Scientific notation with the warranted number of digits.
    pub fn to_decimal(&self) -> String {
        self.to_sci(self.warranted_digits())
    }
}

/// Decimal scientific rendering of an exact rational.
pub fn rational_to_sci(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let approx = (bits(a.numer()) - bits(a.denom())) as f64 * std::f64::consts::LOG10_2;
    let mut e10 = approx.floor() as i64;
    let ten = BigInt::from(10);
    let scaled = |e10: i64| -> BigInt {
        // round(a * 10^(digits-1-e10))
        let p = digits as i64 - 1 - e10;
        let (num, den) = if p >= 0 {
            (a.numer() * ten.pow(p as u32), a.denom().clone())
        } else {
            (a.numer().clone(), a.denom() * ten.pow((-p) as u32))
        };
        let (q, rem) = num.div_rem(&den);
        if rem * 2 >= den {
            q + 1
        } else {
            q
        }
    };
    let lower = ten.pow(digits as u32 - 1);
    let upper = ten.pow(digits as u32);
    let mut m = scaled(e10);
    for _ in 0..4 {
        if m >= upper {
            e10 += 1;
        } else if m < lower {
            e10 -= 1;
        } else {
            break;
        }
        m = scaled(e10);
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

fn add_signed(a: &PrecReal, b: &PrecReal, negate_b: bool) -> PrecReal {
    let prec = a.prec.min(b.prec);
    let bm = if negate_b { -&b.mant } else { b.mant.clone() };
    if b.mant.is_zero() {
        return a.with_precision(prec);
    }
    if a.mant.is_zero() {
        return PrecReal::normalized(bm, b.exp, prec);
    }
    // when one operand sits far below the other's last bit it only matters
    // through rounding; keep a sticky bit in its place
    let (ma, mb) = (a.magnitude().unwrap(), b.magnitude().unwrap());
    let gap = prec as i64 + 4;
    if ma - mb > gap {
        let sticky = PrecReal::normalized(bm.signum(), ma - gap - 1, prec + 8);
        return add_exact(&a.mant, a.exp, &sticky.mant, sticky.exp, prec);
    }
    if mb - ma > gap {
        let sticky = PrecReal::normalized(a.mant.signum(), mb - gap - 1, prec + 8);
        return add_exact(&bm, b.exp, &sticky.mant, sticky.exp, prec);
    }
    add_exact(&a.mant, a.exp, &bm, b.exp, prec)
}

fn add_exact(am: &BigInt, ae: i64, bm: &BigInt, be: i64, prec: u32) -> PrecReal {
    let e = ae.min(be);
    let x = am << (ae - e) as u64;
    let y = bm << (be - e) as u64;
    PrecReal::normalized(x + y, e, prec)
}

impl Add for &PrecReal {
    type Output = PrecReal;
    fn add(self, rhs: &PrecReal) -> PrecReal {
        add_signed(self, rhs, false)
    }
}

impl Sub for &PrecReal {
    type Output = PrecReal;
    fn sub(self, rhs: &PrecReal) -> PrecReal {
        add_signed(self, rhs, true)
    }
}

impl Mul for &PrecReal {
    type Output = PrecReal;
    fn mul(self, rhs: &PrecReal) -> PrecReal {
        PrecReal::normalized(&self.mant * &rhs.mant, self.exp + rhs.exp, self.prec.min(rhs.prec))
    }
}

impl Div for &PrecReal {
    type Output = PrecReal;
    /// Panics on a zero divisor.
    fn div(self, rhs: &PrecReal) -> PrecReal {
        assert!(!rhs.mant.is_zero(), "division by zero");
        let prec = self.prec.min(rhs.prec);
        if self.mant.is_zero() {
            return PrecReal::zero(prec);
        }
        let s = (prec as i64 + bits(&rhs.mant) - bits(&self.mant) + 2).max(0);
        let num = &self.mant << s as u64;
        let (q, rem) = num.div_rem(&rhs.mant);
        // sticky bit so round-to-nearest sees an inexact quotient
        let q = (q << 1u32) + if rem.is_zero() { BigInt::zero() } else { q_sign(&num, &rhs.mant) };
        PrecReal::normalized(q, self.exp - rhs.exp - s - 1, prec)
    }
}

fn q_sign(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_negative() != b.is_negative() {
        BigInt::from(-1)
    } else {
        BigInt::from(1)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $method:ident) => {
        impl $tr for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: PrecReal) -> PrecReal {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&PrecReal> for PrecReal {
            type Output = PrecReal;
            fn $method(self, rhs: &PrecReal) -> PrecReal {
                $tr::$method(&self, rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for &PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        PrecReal {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for PrecReal {
    type Output = PrecReal;
    fn neg(self) -> PrecReal {
        -&self
    }
}

/// Compares exact values, ignoring precision labels.
impl PartialEq for PrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for PrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl PrecReal {
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ma, mb) = (self.magnitude().unwrap(), other.magnitude().unwrap());
        if ma != mb {
            let by_mag = ma.cmp(&mb);
            return if sa > 0 { by_mag } else { by_mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let x = &self.mant << (self.exp - e) as u64;
        let y = &other.mant << (other.exp - e) as u64;
        x.cmp(&y)
    }
}

impl fmt::Display for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl fmt::Debug for PrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{} bits]", self.to_sci(20.min(self.warranted_digits())), self.prec)
    }
}

impl Serialize for PrecReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal())
    }
}
