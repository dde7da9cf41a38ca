use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Renders a rational as `n` or `n/d` in lowest terms with the sign leading.
pub fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the output of [`render_rational`] (also accepts non-reduced input).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn renders_reduced_with_leading_sign() {
        assert_eq!(render_rational(&q(2, -6)), "-1/3");
        assert_eq!(render_rational(&q(0, 5)), "0");
        assert_eq!(render_rational(&q(12, 4)), "3");
        assert_eq!(render_rational(&q(-139, 194400)), "-139/194400");
    }

    #[test]
    fn parse_inverts_render() {
        for r in [q(-139, 194400), q(7, 1), q(0, 1), q(1, 12)] {
            assert_eq!(parse_rational(&render_rational(&r)).unwrap(), r);
        }
        assert_eq!(parse_rational("4/-8").unwrap(), q(-1, 2));
        assert!(matches!(parse_rational("1/0"), Err(Error::DivisionByZero)));
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(10), BigInt::from(3_628_800));
    }
}
