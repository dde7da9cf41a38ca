use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision binary float: `mant * 2^exp`, with `|mant| < 2^prec`.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

/// Shift a magnitude right by `shift` bits, rounding half to even.
/// `sticky` marks nonzero bits already discarded below the input.
fn shift_round(mag: &BigUint, shift: u64, sticky: bool) -> BigUint {
    if shift == 0 {
        return mag.clone();
    }
    let q = mag >> shift;
    let half_bit = mag.bit(shift - 1);
    if !half_bit {
        return q;
    }
    let below_half = shift >= 2 && mag.trailing_zeros().is_some_and(|tz| tz < shift - 1);
    if below_half || sticky || q.bit(0) {
        q + 1u32
    } else {
        q
    }
}

fn bits_of(m: &BigInt) -> u64 {
    m.magnitude().bits()
}

impl BigFloat {
    /// Builds `mant * 2^exp` rounded to `prec` bits.
    pub(crate) fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        Self::round_parts(mant, exp, prec, false)
    }

    fn round_parts(mant: BigInt, exp: i64, prec: u32, sticky: bool) -> Self {
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let b = bits_of(&mant);
        if b <= prec as u64 && !sticky {
            return Self { mant, exp, prec };
        }
        let (sign, mag) = (mant.sign(), mant.magnitude().clone());
        // with a sticky bit and room to spare, append one guard bit so the
        // inexactness still influences rounding
        let (mag, exp, b) = if b <= prec as u64 {
            ((mag << 2u32) | BigUint::one(), exp - 2, b + 2)
        } else {
            (mag, exp, b)
        };
        let shift = b.saturating_sub(prec as u64);
        let mut q = shift_round(&mag, shift, sticky);
        let mut e = exp + shift as i64;
        if q.bits() > prec as u64 {
            q >>= 1u32;
            e += 1;
        }
        Self {
            mant: BigInt::from_biguint(sign, q),
            exp: e,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(n), 0, prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::from_parts(n.clone(), 0, prec)
    }

    /// Exact conversion of a finite f64 (then rounded to `prec`, which is
    /// lossless for `prec >= 53`).
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite f64 {x}");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::from_parts(BigInt::from(m) * sign, e, prec)
    }

    /// `num/den` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(prec);
        }
        let negative = num.is_negative() != den.is_negative();
        let (n, d) = (num.magnitude(), den.magnitude());
        let shift = (prec as i64 + 2 + d.bits() as i64 - n.bits() as i64).max(0);
        let (q, r) = (n << shift as u64).div_rem(d);
        let mant = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Self::round_parts(mant, -shift, prec, !r.is_zero())
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same value rounded (or padded) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`. None for zero.
    pub fn top(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + bits_of(&self.mant) as i64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits_of(&self.mant);
        let (m, e) = if b > 64 {
            let s = b - 64;
            (
                BigInt::from_biguint(self.mant.sign(), self.mant.magnitude() >> s),
                self.exp + s as i64,
            )
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        // split the scaling so intermediate powers never overflow early
        let e = e.clamp(-4000, 4000) as i32;
        let half = e / 2;
        m * 2f64.powi(half) * 2f64.powi(e - half)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest integer (ties away from zero); None if it would not fit i64.
    pub fn round_to_i64(&self) -> Option<i64> {
        let r = self.to_rational().round();
        r.to_integer().to_i64()
    }

    /// Floor as an arbitrary integer.
    pub fn floor_int(&self) -> BigInt {
        self.to_rational().floor().to_integer()
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        let want = 2 * (prec as i64 + 2);
        let mut shift = (want - bits_of(&self.mant) as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = self.mant.magnitude() << shift as u64;
        let r = m.sqrt();
        let exact = &r * &r == m;
        Self::round_parts(BigInt::from(r), (self.exp - shift) / 2, prec, !exact)
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 {
            BigFloat::from_i64(1, self.prec) / self
        } else {
            self.clone()
        };
        let mut k = n.unsigned_abs();
        let mut acc = BigFloat::from_i64(1, self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn add_impl(a: &Self, b: &Self, prec: u32) -> Self {
        if a.is_zero() {
            return b.with_prec(prec);
        }
        if b.is_zero() {
            return a.with_prec(prec);
        }
        let (big, small) = if a.top() >= b.top() { (a, b) } else { (b, a) };
        // bits of `small` far below the result's rounding point only matter
        // as a sticky bit
        let floor = big.top().unwrap() - prec as i64 - 8;
        let (sm, se) = if small.exp < floor && small.top().unwrap() < floor + 1 {
            (BigInt::from(small.signum()), floor - 2)
        } else if small.exp < floor {
            let s = (floor - small.exp) as u64;
            let lost = small
                .mant
                .magnitude()
                .trailing_zeros()
                .is_some_and(|tz| tz < s);
            let mut mag = small.mant.magnitude() >> s;
            if lost {
                mag |= BigUint::one();
            }
            (BigInt::from_biguint(small.mant.sign(), mag), floor)
        } else {
            (small.mant.clone(), small.exp)
        };
        let lo = big.exp.min(se);
        let m = (&big.mant << (big.exp - lo) as u64) + (sm << (se - lo) as u64);
        Self::round_parts(m, lo, prec, false)
    }

    fn mul_impl(a: &Self, b: &Self, prec: u32) -> Self {
        Self::from_parts(&a.mant * &b.mant, a.exp + b.exp, prec)
    }

    fn div_impl(a: &Self, b: &Self, prec: u32) -> Self {
        assert!(!b.is_zero(), "BigFloat division by zero");
        if a.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + bits_of(&b.mant) as i64 - bits_of(&a.mant) as i64).max(0);
        let (q, r) = (a.mant.magnitude() << shift as u64).div_rem(b.mant.magnitude());
        let negative = a.is_negative() != b.is_negative();
        let mant = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Self::round_parts(mant, a.exp - b.exp - shift, prec, !r.is_zero())
    }

    /// Correctly rounded decimal digits: returns (digit string of length
    /// `sig`, decimal exponent of the leading digit). Zero gives ("0…0", 0).
    pub fn decimal_digits(&self, sig: u32) -> (bool, String, i64) {
        let sig = sig.max(1);
        if self.is_zero() {
            return (false, "0".repeat(sig as usize), 0);
        }
        let r = self.to_rational().abs();
        let top = self.top().unwrap();
        let mut e10 = ((top - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let lo = num_traits::pow(ten.clone(), sig as usize - 1);
        let hi = &lo * &ten;
        loop {
            let k = sig as i64 - 1 - e10;
            let scaled = if k >= 0 {
                &r * BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                &r / BigRational::from_integer(num_traits::pow(ten.clone(), (-k) as usize))
            };
            let n = round_half_even(&scaled);
            if n >= hi {
                if n == hi && scaled < BigRational::from_integer(hi.clone()) {
                    // rounding carried into a new digit
                    e10 += 1;
                    return (
                        self.is_negative(),
                        format!("1{}", "0".repeat(sig as usize - 1)),
                        e10,
                    );
                }
                e10 += 1;
            } else if n < lo {
                e10 -= 1;
            } else {
                return (self.is_negative(), n.to_string(), e10);
            }
        }
    }

    /// Decimal rendering with `sig` significant digits. Positional notation
    /// for moderate exponents, otherwise `d.ddde±x`.
    pub fn to_decimal_string(&self, sig: u32) -> String {
        let (neg, digits, e10) = self.decimal_digits(sig);
        let sign = if neg { "-" } else { "" };
        let n = digits.len() as i64;
        if self.is_zero() {
            return format!("0.{}", &digits[1..])
                .trim_end_matches('.')
                .to_string();
        }
        if (-6..21).contains(&e10) {
            if e10 < 0 {
                format!("{sign}0.{}{digits}", "0".repeat((-e10 - 1) as usize))
            } else if e10 + 1 >= n {
                format!("{sign}{digits}{}", "0".repeat((e10 + 1 - n) as usize))
            } else {
                let (a, b) = digits.split_at((e10 + 1) as usize);
                format!("{sign}{a}.{b}")
            }
        } else {
            let (a, b) = digits.split_at(1);
            if b.is_empty() {
                format!("{sign}{a}e{e10}")
            } else {
                format!("{sign}{a}.{b}e{e10}")
            }
        }
    }
}

fn round_half_even(r: &BigRational) -> BigInt {
    let fl = r.floor();
    let frac = r - &fl;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = fl.to_integer();
    match frac.cmp(&half) {
        Ordering::Less => base,
        Ordering::Greater => base + 1,
        Ordering::Equal => {
            if base.is_even() {
                base
            } else {
                base + 1
            }
        }
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl BigFloat {
    fn cmp_value(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let lo = self.exp.min(other.exp);
                let a = self.mant.magnitude() << (self.exp - lo) as u64;
                let b = other.mant.magnitude() << (other.exp - lo) as u64;
                a.cmp(&b)
            }
            o => o,
        };
        if sa < 0 {
            mag.reverse()
        } else {
            mag
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                BigFloat::$imp(self, rhs, self.prec.max(rhs.prec))
            }
        }
        impl $trait<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $trait<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_impl);
binop!(Mul, mul, mul_impl);
binop!(Div, div, div_impl);

impl Sub<&BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        BigFloat::add_impl(self, &-rhs, self.prec.max(rhs.prec))
    }
}
impl Sub<BigFloat> for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: BigFloat) -> BigFloat {
        &self - &rhs
    }
}
impl Sub<&BigFloat> for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        &self - rhs
    }
}
impl Sub<BigFloat> for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: BigFloat) -> BigFloat {
        self - &rhs
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32).unwrap_or(
            ((self.prec as f64) * std::f64::consts::LOG10_2)
                .floor()
                .max(1.0) as u32,
        );
        f.write_str(&self.to_decimal_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn f(x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    #[test]
    fn exact_small_arithmetic() {
        assert_eq!(f(1.5) + f(2.25), f(3.75));
        assert_eq!(f(1.5) - f(2.25), f(-0.75));
        assert_eq!(f(1.5) * f(-2.0), f(-3.0));
        assert_eq!(f(3.0) / f(4.0), f(0.75));
        assert_eq!(f(2.25).sqrt(), f(1.5));
        assert_eq!(f(2.0).powi(-3), f(0.125));
    }

    #[test]
    fn one_third_is_correctly_rounded() {
        let third = BigFloat::from_i64(1, 10) / BigFloat::from_i64(3, 10);
        // 1/3 = 0.0101..b; 10 bits nearest is 683/2048
        assert_eq!(third, BigFloat::from_parts(BigInt::from(683), -11, 10));
    }

    #[test]
    fn tiny_addend_is_absorbed() {
        let one = f(1.0);
        let tiny = one.ldexp(-10_000);
        assert_eq!(&one + &tiny, one);
        assert_eq!(&one - &tiny, one);
    }

    #[test]
    fn ordering_and_sign() {
        assert!(f(-2.0) < f(-1.0));
        assert!(f(0.0) < f(1e-300));
        assert!(f(3.0) > f(2.999));
        assert_eq!(f(-0.5).abs(), f(0.5));
        assert_eq!(f(0.0).signum(), 0);
    }

    #[test]
    fn f64_round_trip() {
        for x in [1.0, -0.1, 1e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(f(x).to_f64(), x);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(f(0.125).to_decimal_string(5), "0.12500");
        assert_eq!(f(-1234.5).to_decimal_string(4), "-1234");
        assert_eq!(f(-1235.5).to_decimal_string(4), "-1236");
        assert_eq!(f(9.99).to_decimal_string(2), "10");
        assert_eq!(f(3628800.0).to_decimal_string(7), "3628800");
        assert_eq!(f(1e-10).to_decimal_string(3), "1.00e-10");
        assert_eq!(f(0.0).to_decimal_string(3), "0.00");
        let third = BigFloat::from_i64(1, P) / BigFloat::from_i64(3, P);
        assert_eq!(third.to_decimal_string(10), "0.3333333333");
    }

    #[test]
    fn ratio_conversion() {
        let x = BigFloat::from_ratio(&BigInt::from(-1), &BigInt::from(12), P);
        assert!((x.to_f64() + 1.0 / 12.0).abs() < 1e-17);
        assert_eq!(x.round_to_i64(), Some(0));
        assert_eq!(f(2.5).round_to_i64(), Some(3));
        assert_eq!(f(-2.5).floor_int(), BigInt::from(-3));
    }
}
