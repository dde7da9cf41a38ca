use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::{parse_rational, render_rational};
use crate::error::{Error, Result};
use crate::precision::{BigFloat, PrecisionContext};

/// Exact element `p + q·√2` of Q(√2).
///
/// Because √2 is irrational the pair `(p, q)` is unique, so structural
/// equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    p: BigRational,
    q: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QSqrt2 {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        Self { p, q }.reduced()
    }

    pub fn rational(p: BigRational) -> Self {
        Self::new(p, BigRational::zero())
    }

    /// `q·√2`
    pub fn sqrt2_multiple(q: BigRational) -> Self {
        Self::new(BigRational::zero(), q)
    }

    pub fn from_ints(pn: i64, pd: i64, qn: i64, qd: i64) -> Self {
        Self::new(
            BigRational::new(pn.into(), pd.into()),
            BigRational::new(qn.into(), qd.into()),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.p
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Lowest-terms form of both parts.
    pub fn reduced(&self) -> Self {
        let fix = |r: &BigRational| BigRational::new(r.numer().clone(), r.denom().clone());
        Self {
            p: fix(&self.p),
            q: fix(&self.q),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            p: self.p.clone(),
            q: -&self.q,
        }
    }

    /// Field norm p² − 2q², zero only for the zero element.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(2.into())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            p: &self.p * k,
            q: &self.q * k,
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = rhs.norm();
        let num = self * &rhs.conjugate();
        Ok(Self {
            p: num.p / &n,
            q: num.q / &n,
        })
    }

    pub fn apply(&self, op: FieldOp, rhs: &Self) -> Result<Self> {
        Ok(match op {
            FieldOp::Add => self + rhs,
            FieldOp::Sub => self - rhs,
            FieldOp::Mul => self * rhs,
            FieldOp::Div => return self.checked_div(rhs),
        })
    }

    /// `p + q·√2` at the context precision; √2 comes from an integer square
    /// root and the parts are each rounded once.
    pub fn to_decimal(&self, ctx: &PrecisionContext) -> BigFloat {
        let wide = ctx.widen(4);
        let value = wide.ratio(&self.p) + wide.ratio(&self.q) * wide.sqrt2();
        value.with_prec(ctx.bits())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(&PrecisionContext::new(20).expect("static precision"))
            .to_f64()
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(2.into());
        QSqrt2 {
            p: &self.p * &rhs.p + &self.q * &rhs.q * two,
            q: &self.p * &rhs.q + &self.q * &rhs.p,
        }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 {
            p: -&self.p,
            q: -&self.q,
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for QSqrt2 {
            type Output = QSqrt2;
            fn $method(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `qsqrt2_arith`: exact field operation; division by zero is an error.
pub fn qsqrt2_arith(a: &QSqrt2, b: &QSqrt2, op: FieldOp) -> Result<QSqrt2> {
    a.apply(op, b)
}

impl fmt::Display for QSqrt2 {
    /// `p`, `q*sqrt(2)`, or `p + q*sqrt(2)` with reduced fractions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p.is_zero(), self.q.is_zero()) {
            (_, true) => f.write_str(&render_rational(&self.p)),
            (true, false) => write!(f, "{}*sqrt(2)", render_rational(&self.q)),
            (false, false) => write!(
                f,
                "{} + {}*sqrt(2)",
                render_rational(&self.p),
                render_rational(&self.q)
            ),
        }
    }
}

impl FromStr for QSqrt2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let sqrt_term = |t: &str| -> Result<BigRational> {
            let coeff = t
                .trim()
                .strip_suffix("*sqrt(2)")
                .ok_or_else(|| Error::InvalidArgument(format!("expected q*sqrt(2): {t:?}")))?;
            parse_rational(coeff)
        };
        if let Some((p, q)) = s.split_once(" + ") {
            return Ok(Self::new(parse_rational(p)?, sqrt_term(q)?));
        }
        if s.ends_with("*sqrt(2)") {
            return Ok(Self::sqrt2_multiple(sqrt_term(s)?));
        }
        Ok(Self::rational(parse_rational(s)?))
    }
}

impl QSqrt2 {
    /// True when the value is `q·√2` (rational part zero).
    pub fn is_pure_sqrt2(&self) -> bool {
        self.p.is_zero()
    }

    pub fn is_pure_rational(&self) -> bool {
        self.q.is_zero()
    }
}
